"""Zero-error capacity tools for finite-state channels."""
from .capacity import (CapacityReport, bounds_additive, bounds_erasure, c0f_erasure_dp,
                       c0f_exact, max_erasures, report, shannon_uniform_lower,
                       sw_erasure_lower, sw_symmetric_bounds)
from .channels import (GilbertElliotSpec, SlidingWindowSpec, build_bursty, build_gilbert_elliot,
                       build_guard_space, build_no_consecutive, build_noiseless,
                       build_sliding_window_erasure, build_sliding_window_symmetric,
                       output_set, parse_family, transfer)
from .codes import Codebook, confusability, max_zero_error_code, rate_scan
from .graph import ChannelMachine, Kind, maximal_ratio, topological_entropy, validate
from .nonstoch import joint_range, maximin_info, overlap_partition, verify_maximin_capacity

__version__ = "0.1.0"
