"""Joint time-vertex Fourier analysis and filtering of periodic graph signals."""

from .graph import (
    Graph,
    Representation,
    joint_graph,
    kronecker_sum,
    representation_matrix,
    ring_graph,
)
from .transforms import (
    DefectiveMatrix,
    JointBasis,
    SpectralBasis,
    dft,
    dft_basis,
    gft,
    graph_basis,
    idft,
    igft,
    ijft,
    jft,
    jft_via_joint_graph_oracle,
    joint_basis,
    unvec,
    vec,
)
from .variation import dirichlet_form, local_variation, local_variation_map, s2_quadratic
from .filters import (
    IdealLowPass,
    PolynomialFilter,
    Rational,
    Tabulated,
    apply_polynomial_filter,
    apply_spectral_filter,
    fit_polynomial_response,
    fit_sweep,
    ideal_lowpass_response,
    response_error,
)
from .wiener import CovarianceModel, mse_report, sample_signals, wiener_operator_dense, wiener_response
from .distributed import comm_cost, simulate_polynomial_filter

__version__ = "0.1.0"
