"""qspectra: spectral analysis of two doubly infinite Jacobi matrices.

The package splits into five parts:

* :mod:`qspectra.qkernel` - q-series, theta functions, the Ramanujan entire
  function, Jackson q-Bessel functions, always with dual evaluation routes.
* :mod:`qspectra.operator_a` - the operator with hopping q^{-n}: eigensolutions,
  self-adjoint extension bookkeeping, secular equations, explicit spectra via
  an elliptic reparametrization, eigenvector norms, orthogonality relations.
* :mod:`qspectra.operator_b` - the discrete Schroedinger operator with
  potential alpha q^{-n}: eigensolutions, explicit point spectrum, Green
  function, full spectral measure, q-Bessel consequences.
* :mod:`qspectra.oracle` - brute-force cross-checks: finite truncations with
  an in-house Sturm bisection eigensolver, tail-bounded summation.
* :mod:`qspectra.cli` - command-line front end emitting JSON/CSV reports.
"""

from .errors import (
    ConvergenceFailure,
    DomainError,
    EmptySpectrum,
    NonConvergent,
    PoleError,
    QSpectraError,
    QuadratureFailure,
    WindowTooSmall,
)
from .qkernel import (
    DEFAULT_POLICY,
    QBase,
    SeriesPolicy,
    ThetaFour,
    jacobi_thetas,
    jackson_qbessel3,
    phi01,
    phi11,
    phi11_reg,
    qpochhammer_finite,
    qpochhammer_inf,
    ramanujan_entire,
    theta,
    xi,
)

__version__ = "0.1.0"
