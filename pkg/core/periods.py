"""
Loop integrals of scalar 1-forms over the projective resolvent set.

A closed form with a nonzero period is not exact, so periods certify
nontrivial de Rham classes. For the matrix trace, Tr(omega_A) = d log det A(z),
and its periods divided by 2 pi i are winding numbers of det A(z).
"""

import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from models.calculation_result import CertificateReport, PeriodReport, WindingReport
from models.forms import LinearFunctional
from models.geometry import Hyperplane, Loop
from models.pencil import MatrixTuple
from utils.config_loader import get_config_value
from .exceptions import (
    DimensionError,
    InconsistentWindingError,
    LinkingLoopError,
    LoopTouchesSpectrumError,
)
from .linalg_core import batched_solve
from .mcform import centrality_check, closedness_check
from .pencil import evaluate, resolvent_margins
from .spectrum import DEFAULT_TOL, membership

logger = logging.getLogger(__name__)

MIN_PHASE_SAMPLES = 2048


class PeriodIntegrator:
    """
    Integrates scalar 1-forms over closed loops with sample doubling.

    The sample count starts at the loop's own count and doubles until two
    successive estimates agree within `tolerance` or `max_samples` is reached.
    """

    def __init__(
        self,
        initial_samples: int = 256,
        max_samples: int = 65536,
        tolerance: float = 1e-10,
        membership_tol: float = DEFAULT_TOL,
        admissibility_factor: float = 10.0,
        winding_tol: float = 1e-6,
        agreement_tol: float = 1e-4,
        nontrivial_threshold: float = 1e-4,
        closed_tol: float = 1e-6,
        central_tol: float = 1e-10,
    ):
        """
        Initialize the integrator.

        Args:
            initial_samples: Fallback starting sample count
            max_samples: Cap of the doubling
            tolerance: Target |I_N - I_2N|
            membership_tol: Membership tolerance of the tuple
            admissibility_factor: Loop samples need margin > factor * membership_tol
            winding_tol: Distance to the nearest integer accepted as quantized
            agreement_tol: Largest accepted gap between trace and phase windings
            nontrivial_threshold: |period| above which a period counts as nonzero
            closed_tol: Closedness error accepted by the certificate
            central_tol: Centrality violation above which the certificate notes
                a noncentral functional
        """
        self.initial_samples = initial_samples
        self.max_samples = max_samples
        self.tolerance = tolerance
        self.membership_tol = membership_tol
        self.admissibility_factor = admissibility_factor
        self.winding_tol = winding_tol
        self.agreement_tol = agreement_tol
        self.nontrivial_threshold = nontrivial_threshold
        self.closed_tol = closed_tol
        self.central_tol = central_tol

    @classmethod
    def from_config(cls, config: Dict) -> 'PeriodIntegrator':
        return cls(
            initial_samples=get_config_value(config, 'periods.initial_samples', 256),
            max_samples=get_config_value(config, 'periods.max_samples', 65536),
            tolerance=get_config_value(config, 'periods.tolerance', 1e-10),
            membership_tol=get_config_value(config, 'numerics.membership_tol', DEFAULT_TOL),
            admissibility_factor=get_config_value(config, 'periods.admissibility_factor', 10.0),
            winding_tol=get_config_value(config, 'periods.winding_tol', 1e-6),
            agreement_tol=get_config_value(config, 'periods.agreement_tol', 1e-4),
            nontrivial_threshold=get_config_value(config, 'periods.nontrivial_threshold', 1e-4),
            closed_tol=get_config_value(config, 'mcform.closed_tol', 1e-6),
            central_tol=get_config_value(config, 'mcform.central_tol', 1e-10),
        )

    @property
    def admissibility_margin(self) -> float:
        return self.admissibility_factor * self.membership_tol

    def validate(self, A: MatrixTuple, params: np.ndarray, points: np.ndarray) -> float:
        """
        Minimum membership margin over loop samples.

        Raises:
            LoopTouchesSpectrumError: If some sample is too close to P(A)
        """
        margins = resolvent_margins(A, points)
        worst = int(np.argmin(margins))
        if margins[worst] <= self.admissibility_margin:
            raise LoopTouchesSpectrumError(
                "Loop comes too close to the projective spectrum",
                parameter=float(params[worst]),
                margin=float(margins[worst]),
            )
        return float(margins[worst])

    def _check_dimension(self, A: MatrixTuple, loop: Loop) -> None:
        if loop.dimension != A.n_plus_1:
            raise DimensionError(f"Loop lives in C^{loop.dimension}, tuple needs C^{A.n_plus_1}")

    def integrate_form(
        self,
        coefficients: Callable[[np.ndarray], np.ndarray],
        loop: Loop,
        validate: Optional[Callable[[np.ndarray, np.ndarray], float]] = None,
    ) -> PeriodReport:
        """
        Integral of sum_j f_j(z) dz_j over a loop for any coefficient map.

        Args:
            coefficients: Maps (N, n+1) points to (N, n+1) coefficients
            loop: Closed integration path
            validate: Optional check called with (parameters, points) before
                each evaluation

        Returns:
            PeriodReport with the |I_N - I_2N| error estimate
        """
        def estimate(num: int) -> complex:
            params, points, dz = loop.quadrature(num)
            if validate is not None:
                validate(params, points)
            return complex(np.sum(coefficients(points) * dz))

        num = max(2, loop.samples or self.initial_samples)
        previous = estimate(num)
        while True:
            num *= 2
            current = estimate(num)
            error = abs(current - previous)
            if error <= self.tolerance * max(1.0, abs(current)) or num >= self.max_samples:
                break
            previous = current

        if error > self.tolerance * max(1.0, abs(current)):
            logger.warning(f"Period did not converge: error {error:.2e} at the cap of {num} samples")
        logger.debug(f"integrate_form: {num} samples, error {error:.2e}")
        return PeriodReport.build(current, error, num, loop=loop.to_dict())

    def _functional_coefficients(self, A: MatrixTuple, phi: LinearFunctional) -> Callable:
        if phi.size != A.k:
            raise DimensionError(f"Functional acts on {phi.size}x{phi.size} matrices, tuple has k={A.k}")
        rhs = np.concatenate(list(A.matrices), axis=1)

        def coefficients(points: np.ndarray) -> np.ndarray:
            stack = evaluate(A, points)
            F = batched_solve(stack, rhs)
            F = F.reshape(points.shape[0], A.k, A.n_plus_1, A.k)
            return np.einsum('ba,najb->nj', phi.weight, F)

        return coefficients

    def integrate(self, A: MatrixTuple, phi: LinearFunctional, loop: Loop) -> PeriodReport:
        """
        Period of phi(omega_A) over a loop.

        Raises:
            LoopTouchesSpectrumError: If a loop sample lies too close to P(A)
        """
        self._check_dimension(A, loop)
        report = self.integrate_form(
            self._functional_coefficients(A, phi),
            loop,
            validate=lambda params, points: self.validate(A, params, points),
        )
        logger.info(f"Period of {phi.label or 'phi'}(omega): {report.value:.10g} "
                    f"(error {report.error:.1e}, {report.samples} samples)")
        return report

    def winding_of_det(self, A: MatrixTuple, loop: Loop) -> WindingReport:
        """
        Winding number of det A(z) along the loop, computed twice.

        Once as (1/2 pi i) times the period of Tr(omega_A), once from the
        unwrapped phase of det A(z) at the loop samples.

        Raises:
            InconsistentWindingError: If the two disagree by more than agreement_tol
        """
        period = self.integrate(A, LinearFunctional.full_trace(A.k), loop)

        _, points = loop.path(max(period.samples, MIN_PHASE_SAMPLES))
        signs, _ = np.linalg.slogdet(evaluate(A, points))
        phase = np.unwrap(np.angle(np.append(signs, signs[0])))
        phase_winding = float((phase[-1] - phase[0]) / (2 * np.pi))

        trace_winding = float(period.normalized.real)
        if abs(trace_winding - phase_winding) > self.agreement_tol:
            raise InconsistentWindingError(
                f"Trace-form winding {trace_winding:.8f} and phase winding {phase_winding:.8f} disagree; "
                "increase the loop samples"
            )
        report = WindingReport(
            period=period,
            phase_winding=phase_winding,
            winding=int(round(trace_winding)),
            tolerance=self.winding_tol,
        )
        if not report.quantized:
            logger.warning(f"Winding {trace_winding:.8f} is not within {self.winding_tol:.0e} of an integer")
        return report

    def nontriviality_certificate(
        self,
        A: MatrixTuple,
        phi: LinearFunctional,
        loops: Sequence[Loop],
        h: Optional[float] = None,
        seed: int = 0,
    ) -> CertificateReport:
        """
        Evidence that phi(omega_A) is a nontrivial cohomology class.

        NONTRIVIAL needs numerical closedness at every loop base point and
        some period above the nontriviality threshold. Anything else is
        INCONCLUSIVE; zero periods over the given loops prove nothing.
        """
        centrality = centrality_check(phi, A, seed=seed, tol=self.membership_tol)
        closedness = max(
            (closedness_check(A, phi, loop.base_point(), h, self.membership_tol) for loop in loops),
            default=0.0,
        )
        periods = [self.integrate(A, phi, loop) for loop in loops]

        notes = []
        closed = closedness <= self.closed_tol
        nonzero = any(abs(p.value) > self.nontrivial_threshold for p in periods)
        if not loops:
            notes.append("no loops supplied")
        if not closed:
            notes.append(f"closedness error {closedness:.2e} exceeds {self.closed_tol:.1e}")
        if loops and not nonzero:
            notes.append("every period vanishes over the supplied loops")
        if centrality.max_violation > self.central_tol:
            notes.append(f"functional is not central on sampled words (violation {centrality.max_violation:.2e})")

        verdict = 'NONTRIVIAL' if closed and nonzero else 'INCONCLUSIVE'
        if verdict == 'INCONCLUSIVE':
            logger.warning(f"Certificate for {phi.label or 'phi'} is inconclusive: {'; '.join(notes)}")
        return CertificateReport(
            verdict=verdict,
            centrality=centrality,
            closedness_error=closedness,
            periods=periods,
            notes=notes,
        )

    def radial_log_test(self, A: MatrixTuple, phi: LinearFunctional, z, radius: float = 1.0) -> PeriodReport:
        """
        Period of phi(omega_A) along t -> t z for t on the circle |t| = radius.

        The contraction identity makes the integrand i phi(I) d theta, so the
        result is 2 pi i phi(I): a form with phi(I) != 0 has no global primitive.
        """
        z = np.asarray(z, dtype=complex)
        verdict = membership(A, z, self.membership_tol)
        if not verdict.invertible:
            raise LoopTouchesSpectrumError("Radial orbit lies in the projective spectrum", margin=verdict.margin)
        loop = Loop(kind='circle', center=np.zeros_like(z), direction=z, radius=radius,
                    samples=self.initial_samples)
        return self.integrate(A, phi, loop)


def _constraint(item) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(item, Hyperplane) or hasattr(item, 'evaluate'):
        return item.evaluate
    if callable(item):
        return item
    raise TypeError(f"Cannot use {type(item).__name__} as an avoid constraint")


def linking_loop(
    plane: Union[Hyperplane, np.ndarray],
    avoid: Iterable = (),
    radius: float = 0.1,
    seed: int = 0,
    max_tries: int = 50,
    samples: int = 256,
    check_samples: int = 64,
) -> Loop:
    """
    Small circle linking a hyperplane once.

    The center is a random unit point of the plane and the direction is the
    conjugate unit normal, so <z, n> = radius * e^{i theta} along the loop.
    Each avoid constraint g (Hyperplane, object with evaluate(), or callable)
    must stay within half of |g(center)| of its center value on the whole
    disk, so it neither vanishes nor winds there.

    Raises:
        LinkingLoopError: If the normal is zero or no admissible center is found
    """
    if not isinstance(plane, Hyperplane):
        try:
            plane = Hyperplane(plane)
        except ValueError as e:
            raise LinkingLoopError(f"Cannot link a degenerate plane: {e}") from e
    constraints = [_constraint(item) for item in avoid]
    rng = np.random.default_rng(seed)
    direction = np.conj(plane.normal)

    theta = 2 * np.pi * np.arange(check_samples) / check_samples
    rho = radius * np.array([0.25, 0.5, 0.75, 1.0])
    offsets = (rho[:, None] * np.exp(1j * theta)[None, :]).ravel()

    for attempt in range(max_tries):
        center = plane.random_point(rng)
        center_norm = np.linalg.norm(center)
        if center_norm == 0:
            continue
        center = center / center_norm
        disk = center[None, :] + offsets[:, None] * direction[None, :]
        admissible = True
        for g in constraints:
            at_center = complex(np.asarray(g(center[None, :])).ravel()[0])
            spread = np.max(np.abs(np.asarray(g(disk)) - at_center))
            if abs(at_center) == 0 or spread > 0.5 * abs(at_center):
                admissible = False
                break
        if admissible:
            logger.debug(f"linking_loop: admissible center after {attempt + 1} tries")
            return Loop(kind='circle', center=center, direction=direction, radius=radius, samples=samples)

    raise LinkingLoopError(f"No admissible linking loop found in {max_tries} tries (radius {radius})")
