"""
Report generator for JSON and CSV artifacts of the numerical engines.
"""

import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd

from models.calculation_result import (
    CertificateReport,
    EquivalenceWitness,
    FactorizationReport,
    FormDiagnostics,
    PeriodReport,
    RankReport,
)
from models.geometry import HyperplaneArrangement
from models.polynomial import HomogeneousPolynomial
from utils.config_loader import get_config_value
from utils.serialization import STDIO, write_json

logger = logging.getLogger(__name__)


class ReportGenerator:
    """Builds JSON documents from result models and writes JSON / CSV artifacts."""

    def __init__(self, config: Optional[Dict] = None):
        """
        Initialize report generator.

        Args:
            config: Configuration dictionary (output.float_format is used for CSV)
        """
        self.config = config or {}
        self.float_format = get_config_value(self.config, 'output.float_format', '%.17g')

    def polynomial_report(self, poly: HomogeneousPolynomial) -> Dict:
        return {
            'degree': poly.degree,
            'nvars': poly.nvars,
            'residual': poly.residual,
            'coefficients': poly.to_dict(),
        }

    def arrangement_report(
        self,
        arrangement: HyperplaneArrangement,
        factorization: Optional[FactorizationReport] = None,
        rank: Optional[RankReport] = None,
    ) -> Dict:
        report = arrangement.to_dict()
        if factorization is not None:
            report['factorization'] = factorization.to_dict()
        if rank is not None:
            report['rank'] = rank.to_dict()
        return report

    def diagnostics_report(
        self,
        label: str,
        centrality_violation: float,
        diagnostics: List[FormDiagnostics],
        central_tol: Optional[float] = None,
    ) -> Dict:
        flags = [d.flags() for d in diagnostics]
        passed = {key: all(f[key] for f in flags) for key in (flags[0] if flags else {})}
        report = {
            'functional': label,
            'centrality_violation': centrality_violation,
            'points': [d.to_dict() for d in diagnostics],
            'passed': passed,
        }
        if central_tol is not None:
            report['central'] = centrality_violation <= central_tol
        return report

    def period_report(self, period: PeriodReport, certificate: Optional[CertificateReport] = None) -> Dict:
        report = period.to_dict()
        if certificate is not None:
            report['verdict'] = certificate.verdict
            report['certificate'] = certificate.to_dict()
        return report

    def witness_report(self, witness: EquivalenceWitness, nullspace_dimension: int) -> Dict:
        report = witness.to_dict()
        report['nullspace_dimension'] = nullspace_dimension
        return report

    def write_json(self, data: Dict, output_path: Union[str, Path] = STDIO) -> None:
        write_json(data, output_path)

    def write_csv(self, frame: pd.DataFrame, output_path: Union[str, Path] = STDIO) -> None:
        """Write a table with round-trip float precision; '-' writes to stdout."""
        if str(output_path) == STDIO:
            frame.to_csv(sys.stdout, index=False, float_format=self.float_format)
            sys.stdout.flush()
            return
        Path(output_path).parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(output_path, index=False, float_format=self.float_format)
        logger.info(f"Wrote {len(frame)} rows to {output_path}")
