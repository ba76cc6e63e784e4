"""Summary report: delimited tables on stdout, figures written to a directory."""

from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

from . import analytic, levels, modforms, orbifold, plotting, qseries, sl2z

SECTION_MARK = "=="


def _level_rows() -> list[list]:
    rows = []
    for m in (3, 4, 5, 6, 7, 8, 11, 41, 125):
        s = levels.level_summary(m)
        rows.append([m, s.d_m, s.c_m, qseries.format_rational(s.chi_compact), s.genus])
    return rows


def _eisenstein_rows(n: int = 8, seed: int = 7) -> list[list]:
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2.0))
        tau, _ = sl2z.reduce_to_fundamental_domain(tau)
        ref = analytic.eisenstein_g(4, tau)
        lat = analytic.eisenstein_lattice_sum(4, tau)
        rows.append([f"{tau.real:.6f}", f"{tau.imag:.6f}", f"{abs(lat - ref) / abs(ref):.3e}"])
    return rows


def build_report(outdir: str, depth: int = 3) -> tuple[dict[str, dict], list[str]]:
    """Compute the summary tables and write the figures into ``outdir``.

    Returns (sections, figure paths); each section has ``header`` and ``rows``.
    """
    os.makedirs(outdir, exist_ok=True)
    j = qseries.j_series(6)
    sections = {
        "j_coefficients": {
            "header": ["n", "c(n)"],
            "rows": [[n, str(j[n])] for n in range(-1, 6)],
        },
        "levels": {"header": ["m", "d_m", "cusps", "chi", "genus"], "rows": _level_rows()},
        "dimensions": {
            "header": ["w", "dim M_w", "dim S_w"],
            "rows": [[w, modforms.dim_M(w), modforms.cusp_dim(w)] for w in range(0, 38, 2)],
        },
        "euler": {
            "header": ["object", "chi"],
            "rows": [
                ["M11", qseries.format_rational(orbifold.stratified_euler(orbifold.moduli_strata()))],
                ["Mbar11", qseries.format_rational(orbifold.stratified_euler(orbifold.moduli_strata(True)))],
                ["hexagon/S3", qseries.format_rational(orbifold.simplicial_euler(orbifold.hexagon_s3_complex()))],
            ],
        },
        "abelianization": {
            "header": ["group", "invariants"],
            "rows": [["SL2(Z)", " ".join(map(str, sl2z.sl2z_abelianization()))]],
        },
        "eisenstein_g4": {"header": ["re tau", "im tau", "rel err"], "rows": _eisenstein_rows()},
    }
    figures = [
        plotting.save_tiling(depth, os.path.join(outdir, "tiling.svg")),
        plotting.save_tiling(depth, os.path.join(outdir, "tiling.png")),
        plotting.save_j_axis(os.path.join(outdir, "j_imaginary_axis.png")),
    ]
    delta_norm = modforms.petersson(modforms.FormExpression.delta(), modforms.FormExpression.delta())
    sections["petersson"] = {"header": ["form", "<f,f>"], "rows": [["Delta", f"{delta_norm.real:.12e}"]]}
    return sections, figures


def render_delimited(sections: dict[str, dict], figures: list[str], sep: str = "\t") -> str:
    """Sections headed by ``== name ==`` with tab-separated rows."""
    out = []
    for name, sec in sections.items():
        out.append(f"{SECTION_MARK} {name} {SECTION_MARK}")
        out.append(sep.join(map(str, sec["header"])))
        out.extend(sep.join(_cell(c) for c in row) for row in sec["rows"])
    out.append(f"{SECTION_MARK} figures {SECTION_MARK}")
    out.extend(figures)
    return "\n".join(out)


def _cell(value) -> str:
    if isinstance(value, Fraction):
        return qseries.format_rational(value)
    return str(value)
