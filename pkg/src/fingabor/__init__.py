"""Time-frequency analysis on finite abelian groups.

Groups are products of cyclic factors with a distinguished subgroup; on
top of them the package builds translation/modulation operators, the
windowed Fourier transform, mixed quasi-norms with covering maxima,
quasi-lattice frame systems, phase-space quantization, localization
operators, and an eigensolver used to study spectral decay.
"""
from .group import (
    DualElement,
    EmptyGroup,
    GroupElement,
    GroupError,
    GroupMismatch,
    GroupSpec,
    NonDivisor,
    annihilator,
    character,
    coset_representatives,
    dual_spec,
    make_group,
    phase_spec,
)
from .signal import (
    PhaseFunction,
    Signal,
    constant,
    convolve,
    convolve_phase,
    delta,
    fourier,
    indicator,
    inner,
    inner_phase,
    inverse_fourier,
    involution,
    modulate,
    norm_l2,
    subgroup_indicator,
    tensor,
    tf_shift,
    translate,
    zeros,
)
from .tfa import (
    TestFunction,
    gaussian_circ,
    gaussian_window,
    jmap,
    jmap_inverse,
    moyal_residual,
    rihaczek,
    stft,
    stft_point,
    testfunction_stft,
    window_constant,
)
from .norms import (
    EmptyWindow,
    Exponents,
    NonPositiveExponent,
    Weight,
    WindowSet,
    ZeroWindow,
    canonical_window,
    check_moderate,
    check_submultiplicative,
    full_window,
    inclusion_check,
    maximal_function,
    mixed_quasi_norm,
    modulation_norm,
    polynomial_weight,
    unit_window,
    wiener_norm,
    young_verify,
)
from .gabor import (
    DualWindowMismatch,
    NotAFrame,
    QuasiLattice,
    analysis,
    discrete_modnorm,
    dual_window,
    expansion_residual,
    frame_bounds,
    frame_operator,
    is_tight,
    lattice_from_points,
    quasi_lattice,
    quotient_coefficients,
    representative_independence_residual,
    synthesis,
)
from .operators import (
    OperatorMatrix,
    convolution_relation_probe,
    gabor_matrix,
    gabor_matrix_closed_form,
    kn_apply,
    kn_kernel,
    kn_matrix,
    loc_to_kn_symbol,
    localization_apply,
    localization_matrix,
    matrix_from_apply,
    rihaczek_continuity_probe,
)
from .spectral import (
    DegenerateSpectrum,
    EigenPair,
    NotHermitian,
    decay_comparison,
    decay_profile,
    haar_random_unit,
    hermitian_eigen,
)

__version__ = "0.1.0"
