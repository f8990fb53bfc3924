"""Gnuplot scripts written next to the CSV files they plot."""

from __future__ import annotations

from pathlib import Path

_PROFILE = """\
set datafile separator ","
set key autotitle columnhead
set title "{title}"
set xlabel "{index}"
set ylabel "fitted exponent"
set grid
set terminal pngcairo size 800,500
set output "{png}"
plot "{csv}" using {column}:(column("exponent") > -1e300 ? column("exponent") : 1/0) \\
     with linespoints pt 7 title "N(n)"
"""

_WAVEFRONT_1D = """\
set datafile separator ","
set title "{title}"
set xlabel "x"
set ylabel "direction"
set yrange [-0.5:4]
set ytics ("+" 0, "-" 3.14159)
set grid
set terminal pngcairo size 800,400
set output "{png}"
plot "{csv}" using 1:(column("in_family") == 0 ? column("cone_theta1") : 1/0) \\
     with points pt 7 ps 1.5 title "flagged"
"""

_WAVEFRONT_2D = """\
set datafile separator ","
set title "{title}"
set xlabel "x1"
set ylabel "x2"
set size ratio -1
set grid
set terminal pngcairo size 700,700
set output "{png}"
mid(a, b) = (a + b) / 2
plot "{csv}" using 1:2:(column("in_family") == 0 ? 0.2*cos(mid(column("cone_theta1"), \\
     column("cone_theta2"))) : 1/0):(0.2*sin(mid(column("cone_theta1"), \\
     column("cone_theta2")))) with vectors head filled title "flagged"
"""


def _write(csv_path: Path, text: str) -> Path:
    script = csv_path.with_suffix(".gp")
    script.write_text(text, encoding="utf-8")
    return script


def profile_script(csv_path: Path, title: str) -> Path:
    """Exponent against the first index column of a profile CSV."""
    header = csv_path.read_text(encoding="utf-8").splitlines()[0].split(",")
    return _write(csv_path, _PROFILE.format(
        title=title,
        index=header[0],
        png=csv_path.with_suffix(".png").name,
        csv=csv_path.name,
        column=1,
    ))


def wavefront_script(csv_path: Path, dim: int, title: str) -> Path:
    """Flagged (x, direction) pairs from a wavefront CSV."""
    template = _WAVEFRONT_1D if dim == 1 else _WAVEFRONT_2D
    return _write(csv_path, template.format(
        title=title, png=csv_path.with_suffix(".png").name, csv=csv_path.name
    ))
