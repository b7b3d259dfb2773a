"""momentpoly: tensor marginals, spectra, scaling tests and slice-rank
analysis for moment-polytope membership questions."""

from .core import (
    SpectrumPoint,
    TensorFormatError,
    ZeroTensorError,
    as_tensor,
    conciseness_profile,
    direct_sum,
    dump_tensor,
    dumps_tensor,
    flatten,
    gram_matrix,
    is_concise,
    kron_product,
    l1_delta,
    load_tensor,
    loads_tensor,
    marginal,
    moment_map,
    numerical_rank,
    pad,
    random_tensor,
    restrict,
    spec_point,
    spectrum,
    tensor_from_dict,
    tensor_support,
    tensor_to_dict,
)
from .constructions import (
    balanced_pencil,
    bci_tensor,
    imm_collapse_map,
    imm_tensor,
    matmul_a1b_completion_map,
    matmul_outer_embedding_maps,
    matmul_tensor,
    pencil_tensor,
    poly_mult_tensor,
    unit_tensor,
    unit_to_poly_mult_maps,
    wedge3,
    zero_tensor,
)
from .scaling import (
    MembershipVerdict,
    ScalingConfig,
    ScalingReport,
    SemistabilityVerdict,
    kempf_ness_value,
    membership_test,
    scale_uniform,
    semistability_test,
    uniform_point_test,
)
from .rank_analysis import (
    DirectionSamples,
    MinrankCertificate,
    RankProfile,
    SeparationReport,
    TightnessCheck,
    border_subrank_bound,
    matmul_degeneration_bound,
    maxrank,
    minrank_poly_mult_exact,
    minrank_upper,
    rank1_factor_check,
    separation_check,
    slice_combination,
    subspace_low_rank_bound,
    support_entropy_rate,
    support_entropy_rate_search,
    tight_certificate_check,
)

__version__ = "0.1.0"
