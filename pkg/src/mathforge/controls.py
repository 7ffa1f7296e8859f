"""Declarative interactive controls and their grid layout.

Descriptors model the slider/checkbox/selector/input vocabulary as validated
data; ``render_form_spec`` compiles a panel into a renderer-neutral JSON form
document consumed by the web client and the terminal prompt loop.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .latexgen import MathSnippet
from .ratmat import rat

ZONES = ("top", "bottom", "left", "right")


class InputValueType(Enum):
    INTEGER = "integer"
    RATIONAL = "rational"
    TEXT = "text"
    EXPRESSION = "expression"


class ColorWidget(Enum):
    JPICKER = "jpicker"
    FARBTASTIC = "farbtastic"
    COLORPICKER = "colorpicker"


@dataclass(frozen=True)
class Slider:
    vmin: Fraction
    vmax: Fraction
    step: Fraction
    default: Fraction
    label: str = ""
    display_value: bool = True
    kind = "slider"


@dataclass(frozen=True)
class RangeSlider:
    vmin: Fraction
    vmax: Fraction
    step: Fraction
    default: tuple[Fraction, Fraction]
    label: str = ""
    kind = "range_slider"


@dataclass(frozen=True)
class Checkbox:
    default: bool = False
    label: str = ""
    kind = "checkbox"


@dataclass(frozen=True)
class Selector:
    values: tuple[str, ...]
    label: str = ""
    default: Optional[str] = None
    nrows: Optional[int] = None
    ncols: Optional[int] = None
    width: Optional[int] = None
    buttons: bool = False
    kind = "selector"


@dataclass(frozen=True)
class InputBox:
    default: str = ""
    label: str = ""
    value_type: InputValueType = InputValueType.TEXT
    width: Optional[int] = None
    kind = "input_box"


@dataclass(frozen=True)
class InputGrid:
    nrows: int
    ncols: int
    default: tuple[str, ...]
    label: str = ""
    width: Optional[int] = None
    kind = "input_grid"


@dataclass(frozen=True)
class ColorSelector:
    default: tuple[Fraction, Fraction, Fraction] = (Fraction(0), Fraction(0), Fraction(0))
    label: str = ""
    widget: ColorWidget = ColorWidget.JPICKER
    hide_box: bool = False
    kind = "color_selector"


ControlDescriptor = Union[
    Slider, RangeSlider, Checkbox, Selector, InputBox, InputGrid, ColorSelector
]


def slider(vmin, vmax, step=1, default=None, label="", display_value=True) -> Slider:
    vmin, vmax, step = rat(vmin), rat(vmax), rat(step)
    return Slider(vmin, vmax, step, rat(default) if default is not None else vmin, label, display_value)


@dataclass(frozen=True)
class LayoutSpec:
    """Rows of control names for each of the four zones."""

    top: tuple[tuple[str, ...], ...] = ()
    bottom: tuple[tuple[str, ...], ...] = ()
    left: tuple[tuple[str, ...], ...] = ()
    right: tuple[tuple[str, ...], ...] = ()

    @classmethod
    def from_obj(cls, obj) -> "LayoutSpec":
        """Accept {'top': [...], ...} or a bare list of rows (top zone)."""
        if isinstance(obj, (list, tuple)):
            obj = {"top": obj}
        unknown = set(obj) - set(ZONES)
        if unknown:
            raise ValueError(f"unknown layout zones: {sorted(unknown)}")
        zones = {
            zone: tuple(tuple(str(name) for name in row) for row in obj.get(zone, ()))
            for zone in ZONES
        }
        return cls(**zones)

    def names(self) -> list[str]:
        return [
            name
            for zone in ZONES
            for row in getattr(self, zone)
            for name in row
        ]


@dataclass(frozen=True)
class ControlPanel:
    controls: dict[str, ControlDescriptor]
    layout: Optional[LayoutSpec] = None
    caption: Optional[Union[str, MathSnippet]] = None


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    subject: str = ""


class PanelValidationError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(f"{d.code}: {d.message}" for d in diagnostics))
        self.diagnostics = diagnostics


def _check_control(name: str, c: ControlDescriptor, out: list[Diagnostic]):
    def bad(code, message):
        out.append(Diagnostic(code, message, name))

    if isinstance(c, (Slider, RangeSlider)):
        if not c.vmin < c.vmax:
            bad("BadRange", f"vmin {c.vmin} must be < vmax {c.vmax}")
        if c.step <= 0:
            bad("BadRange", f"step {c.step} must be positive")
        defaults = c.default if isinstance(c, RangeSlider) else (c.default,)
        if isinstance(c, RangeSlider) and defaults[0] > defaults[1]:
            bad("BadRange", "range default must satisfy left <= right")
        for value in defaults:
            if not (c.vmin <= value <= c.vmax):
                bad("DefaultOutOfRange", f"default {value} outside [{c.vmin}, {c.vmax}]")
    elif isinstance(c, Selector):
        if not c.values:
            bad("BadRange", "selector needs at least one value")
        if c.default is not None and c.default not in c.values:
            bad("DefaultOutOfRange", f"default {c.default!r} not among values")
        if c.buttons and c.nrows is not None and c.ncols is not None:
            if c.nrows * c.ncols < len(c.values):
                bad("GridSizeMismatch", f"{c.nrows}×{c.ncols} grid cannot hold {len(c.values)} buttons")
    elif isinstance(c, InputGrid):
        if c.nrows < 1 or c.ncols < 1:
            bad("BadRange", "grid dimensions must be >= 1")
        elif len(c.default) != c.nrows * c.ncols:
            bad("GridSizeMismatch", f"default has {len(c.default)} cells, grid holds {c.nrows * c.ncols}")
    elif isinstance(c, ColorSelector):
        for channel in c.default:
            if not (0 <= channel <= 1):
                bad("BadRange", f"color channel {channel} outside [0, 1]")


def validate_panel(p: ControlPanel) -> ControlPanel:
    """Return the panel unchanged, or raise with every diagnostic found."""
    diagnostics: list[Diagnostic] = []
    for name, control in p.controls.items():
        if not name:
            diagnostics.append(Diagnostic("DuplicateName", "empty control name", name))
        _check_control(name, control, diagnostics)
    if p.layout is not None:
        seen = set()
        for name in p.layout.names():
            if name not in p.controls:
                diagnostics.append(
                    Diagnostic("UnknownLayoutName", f"layout references unknown control {name!r}", name)
                )
            if name in seen:
                diagnostics.append(
                    Diagnostic("DuplicateName", f"{name!r} appears twice in the layout", name)
                )
            seen.add(name)
    if diagnostics:
        raise PanelValidationError(diagnostics)
    return p


@dataclass(frozen=True)
class Placement:
    """Normalized grid: every control placed exactly once."""

    top: tuple[tuple[str, ...], ...]
    bottom: tuple[tuple[str, ...], ...]
    left: tuple[tuple[str, ...], ...]
    right: tuple[tuple[str, ...], ...]


def arrange(p: ControlPanel) -> Placement:
    """Deterministic placement; unplaced controls stack one-per-row on top."""
    layout = p.layout or LayoutSpec()
    placed = set(layout.names())
    extra_rows = tuple((name,) for name in p.controls if name not in placed)
    return Placement(
        top=layout.top + extra_rows,
        bottom=layout.bottom,
        left=layout.left,
        right=layout.right,
    )


def _frac_str(value: Fraction) -> str:
    return str(value)


def _control_params(c: ControlDescriptor) -> dict:
    if isinstance(c, Slider):
        return {
            "kind": c.kind,
            "vmin": _frac_str(c.vmin),
            "vmax": _frac_str(c.vmax),
            "step": _frac_str(c.step),
            "default": _frac_str(c.default),
            "label": c.label,
            "display_value": c.display_value,
        }
    if isinstance(c, RangeSlider):
        return {
            "kind": c.kind,
            "vmin": _frac_str(c.vmin),
            "vmax": _frac_str(c.vmax),
            "step": _frac_str(c.step),
            "default": [_frac_str(c.default[0]), _frac_str(c.default[1])],
            "label": c.label,
        }
    if isinstance(c, Checkbox):
        return {"kind": c.kind, "default": c.default, "label": c.label}
    if isinstance(c, Selector):
        return {
            "kind": c.kind,
            "values": list(c.values),
            "label": c.label,
            "default": c.default,
            "nrows": c.nrows,
            "ncols": c.ncols,
            "width": c.width,
            "buttons": c.buttons,
        }
    if isinstance(c, InputBox):
        return {
            "kind": c.kind,
            "default": c.default,
            "label": c.label,
            "value_type": c.value_type.value,
            "width": c.width,
        }
    if isinstance(c, InputGrid):
        return {
            "kind": c.kind,
            "nrows": c.nrows,
            "ncols": c.ncols,
            "default": list(c.default),
            "label": c.label,
            "width": c.width,
        }
    if isinstance(c, ColorSelector):
        return {
            "kind": c.kind,
            "default": [_frac_str(ch) for ch in c.default],
            "label": c.label,
            "widget": c.widget.value,
            "hide_box": c.hide_box,
        }
    raise TypeError(f"not a control descriptor: {c!r}")


def render_form_spec(p: ControlPanel) -> dict:
    """Compile a validated panel to the JSON form document."""
    validate_panel(p)
    placement = arrange(p)
    caption = p.caption.wrapped() if isinstance(p.caption, MathSnippet) else p.caption
    return {
        "caption": caption,
        "grid": {
            "top": [list(row) for row in placement.top],
            "bottom": [list(row) for row in placement.bottom],
            "left": [list(row) for row in placement.left],
            "right": [list(row) for row in placement.right],
        },
        "controls": {name: _control_params(c) for name, c in p.controls.items()},
    }


def form_spec_json(p: ControlPanel) -> str:
    return json.dumps(render_form_spec(p), ensure_ascii=False)
