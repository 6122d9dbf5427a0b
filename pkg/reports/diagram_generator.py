"""
Diagram generator for affine slices and spectrum point clouds.
"""

import logging
from typing import Optional

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from matplotlib.figure import Figure
import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

MARGIN_FLOOR = 1e-16


class DiagramGenerator:
    """Generates diagrams of projective spectra."""

    def __init__(self, dpi: int = 150):
        """
        Initialize diagram generator.

        Args:
            dpi: Resolution for saved diagrams
        """
        self.dpi = dpi

    def _save(self, fig: Figure, output_path: Optional[str]) -> Figure:
        if output_path:
            fig.savefig(output_path, dpi=self.dpi, bbox_inches='tight')
            logger.info(f"Saved diagram to {output_path}")
        return fig

    def generate_slice_diagram(self, frame: pd.DataFrame, title: str = "", output_path: Optional[str] = None) -> Figure:
        """
        Heatmap of log10 margin over an affine slice; dark curves are the spectrum.

        Args:
            frame: Output of spectrum.affine_slice
            title: Plot title
            output_path: Optional path to save diagram

        Returns:
            Matplotlib figure
        """
        x_col, y_col = frame.columns[0], frame.columns[1]
        xs = np.unique(frame[x_col].to_numpy())
        ys = np.unique(frame[y_col].to_numpy())
        # affine_slice emits rows with x as the slow index
        values = np.log10(np.maximum(frame['margin'].to_numpy(), MARGIN_FLOOR)).reshape(xs.size, ys.size)

        fig, ax = plt.subplots(figsize=(7, 6))
        mesh = ax.pcolormesh(xs, ys, values.T, shading='auto', cmap='viridis')
        fig.colorbar(mesh, ax=ax, label='log10 margin')
        ax.set_xlabel(x_col)
        ax.set_ylabel(y_col)
        ax.set_aspect('equal')
        ax.set_title(title or 'Affine slice of the projective spectrum')
        return self._save(fig, output_path)

    def generate_cloud_diagram(self, frame: pd.DataFrame, title: str = "", output_path: Optional[str] = None) -> Figure:
        """
        Scatter of |z0| against |z1| for spectrum points.

        Args:
            frame: Output of spectrum.cloud_frame
            title: Plot title
            output_path: Optional path to save diagram

        Returns:
            Matplotlib figure
        """
        mod0 = np.hypot(frame['re_z0'], frame['im_z0'])
        mod1 = np.hypot(frame['re_z1'], frame['im_z1'])

        fig, ax = plt.subplots(figsize=(6, 6))
        ax.scatter(mod0, mod1, s=8, alpha=0.7)
        ax.plot([0, 1], [0, 1], color='gray', linestyle='--', linewidth=0.8, label='|z0| = |z1|')
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1)
        ax.set_xlabel('|z0|')
        ax.set_ylabel('|z1|')
        ax.set_title(title or f'Spectrum points ({len(frame)})')
        ax.legend(loc='lower right')
        ax.grid(alpha=0.3)
        return self._save(fig, output_path)
