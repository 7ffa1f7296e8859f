import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mathforge.controls import (
    Checkbox,
    ColorSelector,
    ColorWidget,
    ControlPanel,
    InputBox,
    InputGrid,
    InputValueType,
    LayoutSpec,
    PanelValidationError,
    RangeSlider,
    Selector,
    Slider,
    arrange,
    form_spec_json,
    render_form_spec,
    slider,
    validate_panel,
)


def parse_form_spec(doc: dict) -> ControlPanel:
    """Reference parser for the form-spec document (round-trip oracle)."""
    controls = {}
    for name, params in doc["controls"].items():
        kind = params["kind"]
        if kind == "slider":
            controls[name] = Slider(
                Fraction(params["vmin"]),
                Fraction(params["vmax"]),
                Fraction(params["step"]),
                Fraction(params["default"]),
                params["label"],
                params["display_value"],
            )
        elif kind == "range_slider":
            controls[name] = RangeSlider(
                Fraction(params["vmin"]),
                Fraction(params["vmax"]),
                Fraction(params["step"]),
                (Fraction(params["default"][0]), Fraction(params["default"][1])),
                params["label"],
            )
        elif kind == "checkbox":
            controls[name] = Checkbox(params["default"], params["label"])
        elif kind == "selector":
            controls[name] = Selector(
                tuple(params["values"]),
                params["label"],
                params["default"],
                params["nrows"],
                params["ncols"],
                params["width"],
                params["buttons"],
            )
        elif kind == "input_box":
            controls[name] = InputBox(
                params["default"],
                params["label"],
                InputValueType(params["value_type"]),
                params["width"],
            )
        elif kind == "input_grid":
            controls[name] = InputGrid(
                params["nrows"],
                params["ncols"],
                tuple(params["default"]),
                params["label"],
                params["width"],
            )
        elif kind == "color_selector":
            controls[name] = ColorSelector(
                tuple(Fraction(ch) for ch in params["default"]),
                params["label"],
                ColorWidget(params["widget"]),
                params["hide_box"],
            )
        else:
            raise AssertionError(f"unknown kind {kind!r}")
    grid = doc["grid"]
    layout = LayoutSpec(
        top=tuple(tuple(row) for row in grid["top"]),
        bottom=tuple(tuple(row) for row in grid["bottom"]),
        left=tuple(tuple(row) for row in grid["left"]),
        right=tuple(tuple(row) for row in grid["right"]),
    )
    return ControlPanel(controls, layout, doc["caption"])


class TestValidation:
    def test_table1_slider_is_valid(self):
        panel = ControlPanel({"a": slider(1, 9, 1, default=4, label="α")})
        assert validate_panel(panel) is panel

    def test_bad_range(self):
        panel = ControlPanel({"a": slider(5, 1)})
        with pytest.raises(PanelValidationError) as err:
            validate_panel(panel)
        assert any(d.code == "BadRange" for d in err.value.diagnostics)

    def test_default_out_of_range(self):
        panel = ControlPanel({"a": slider(1, 9, 1, default=12)})
        with pytest.raises(PanelValidationError) as err:
            validate_panel(panel)
        assert [d.code for d in err.value.diagnostics] == ["DefaultOutOfRange"]

    def test_unknown_layout_name(self):
        panel = ControlPanel(
            {"a": Checkbox()}, LayoutSpec(top=((("z"),),))
        )
        with pytest.raises(PanelValidationError) as err:
            validate_panel(panel)
        assert any(d.code == "UnknownLayoutName" for d in err.value.diagnostics)

    def test_duplicate_layout_name(self):
        panel = ControlPanel({"a": Checkbox()}, LayoutSpec(top=(("a", "a"),)))
        with pytest.raises(PanelValidationError) as err:
            validate_panel(panel)
        assert any(d.code == "DuplicateName" for d in err.value.diagnostics)

    def test_grid_size_mismatch(self):
        panel = ControlPanel({"g": InputGrid(2, 2, ("1", "2", "3"))})
        with pytest.raises(PanelValidationError) as err:
            validate_panel(panel)
        assert any(d.code == "GridSizeMismatch" for d in err.value.diagnostics)

    def test_selector_button_grid_too_small(self):
        panel = ControlPanel(
            {"s": Selector(("a", "b", "c"), nrows=1, ncols=2, buttons=True)}
        )
        with pytest.raises(PanelValidationError) as err:
            validate_panel(panel)
        assert any(d.code == "GridSizeMismatch" for d in err.value.diagnostics)

    def test_selector_bad_default(self):
        panel = ControlPanel({"s": Selector(("a", "b"), default="c")})
        with pytest.raises(PanelValidationError):
            validate_panel(panel)

    def test_range_slider_order(self):
        bad = RangeSlider(Fraction(1), Fraction(10), Fraction(1), (Fraction(5), Fraction(4)))
        with pytest.raises(PanelValidationError):
            validate_panel(ControlPanel({"r": bad}))

    def test_color_channel_range(self):
        bad = ColorSelector((Fraction(2), Fraction(0), Fraction(0)))
        with pytest.raises(PanelValidationError):
            validate_panel(ControlPanel({"c": bad}))

    def test_all_diagnostics_reported_together(self):
        panel = ControlPanel(
            {"a": slider(5, 1), "g": InputGrid(2, 2, ("x",))},
            LayoutSpec(top=(("nope",),)),
        )
        with pytest.raises(PanelValidationError) as err:
            validate_panel(panel)
        codes = {d.code for d in err.value.diagnostics}
        assert {"BadRange", "GridSizeMismatch", "UnknownLayoutName"} <= codes


class TestArrange:
    def test_table2_example1(self):
        panel = ControlPanel(
            {
                "a": InputBox("2+2", "Вираз", width=5),
                "b": slider(2, 5, "3/17", 3, "R"),
                "c": Checkbox(False, "Відобразити"),
            },
            LayoutSpec(top=(("a", "b"),), left=(("c",),)),
        )
        placement = arrange(validate_panel(panel))
        assert placement.top == (("a", "b"),)
        assert placement.left == (("c",),)

    def test_default_stacking(self):
        panel = ControlPanel({"a": Checkbox(), "b": Checkbox(), "c": Checkbox()})
        placement = arrange(panel)
        assert placement.top == (("a",), ("b",), ("c",))
        assert placement.left == placement.right == placement.bottom == ()

    def test_bare_list_is_top_zone(self):
        layout = LayoutSpec.from_obj([["a", "b"], ["c", "d"], ["e"]])
        assert layout.top == (("a", "b"), ("c", "d"), ("e",))
        assert layout.bottom == ()

    def test_from_obj_rejects_unknown_zone(self):
        with pytest.raises(ValueError):
            LayoutSpec.from_obj({"middle": [["a"]]})

    def test_every_control_placed_once(self):
        panel = ControlPanel(
            {"a": Checkbox(), "b": Checkbox(), "c": Checkbox(), "d": Checkbox()},
            LayoutSpec(right=(("b",),), bottom=(("d",),)),
        )
        placement = arrange(panel)
        names = [
            name
            for zone in (placement.top, placement.bottom, placement.left, placement.right)
            for row in zone
            for name in row
        ]
        assert sorted(names) == ["a", "b", "c", "d"]
        assert placement.top == (("a",), ("c",))


class TestFormSpec:
    def test_checkbox_payload(self):
        doc = render_form_spec(
            ControlPanel({"a": Checkbox(True, "Показувати відповідь")})
        )
        assert doc["controls"]["a"] == {
            "kind": "checkbox",
            "default": True,
            "label": "Показувати відповідь",
        }

    def test_slider_rational_default(self):
        doc = render_form_spec(ControlPanel({"b": slider(2, 5, "3/17", "52/17", "R")}))
        assert doc["controls"]["b"]["default"] == "52/17"
        assert doc["controls"]["b"]["step"] == "3/17"

    def test_json_is_stable(self):
        panel = ControlPanel(
            {"a": Checkbox(), "b": slider(1, 9)}, LayoutSpec(top=(("a", "b"),))
        )
        assert form_spec_json(panel) == form_spec_json(panel)
        json.loads(form_spec_json(panel))

    def test_invalid_panel_rejected(self):
        with pytest.raises(PanelValidationError):
            render_form_spec(ControlPanel({"a": slider(9, 1)}))

    def test_math_snippet_caption_is_wrapped(self):
        from mathforge.latexgen import MathSnippet

        panel = ControlPanel(
            {"a": Checkbox()}, caption=MathSnippet("y=\\sin(a\\cdot x+b)")
        )
        assert render_form_spec(panel)["caption"] == "$y=\\sin(a\\cdot x+b)$"


names = st.text(alphabet="abcdefghij", min_size=1, max_size=3)
labels = st.text(max_size=8)


def _frac(draw) -> Fraction:
    return Fraction(draw(st.integers(-50, 50)), draw(st.integers(1, 9)))


@st.composite
def descriptors(draw):
    kind = draw(st.sampled_from(["slider", "checkbox", "selector", "input_box", "input_grid", "color_selector", "range_slider"]))
    if kind in ("slider", "range_slider"):
        lo = _frac(draw)
        hi = lo + Fraction(draw(st.integers(1, 20)), draw(st.integers(1, 4)))
        step = Fraction(draw(st.integers(1, 9)), draw(st.integers(1, 9)))
        # defaults interpolated inside [lo, hi]
        t1 = Fraction(draw(st.integers(0, 10)), 10)
        t2 = Fraction(draw(st.integers(0, 10)), 10)
        d1 = lo + (hi - lo) * min(t1, t2)
        d2 = lo + (hi - lo) * max(t1, t2)
        if kind == "slider":
            return Slider(lo, hi, step, d1, draw(labels), draw(st.booleans()))
        return RangeSlider(lo, hi, step, (d1, d2), draw(labels))
    if kind == "checkbox":
        return Checkbox(draw(st.booleans()), draw(labels))
    if kind == "selector":
        values = tuple(draw(st.lists(st.text(min_size=1, max_size=5), min_size=1, max_size=4, unique=True)))
        return Selector(values, draw(labels), draw(st.sampled_from(values)))
    if kind == "input_box":
        return InputBox(draw(labels), draw(labels), draw(st.sampled_from(InputValueType)))
    if kind == "input_grid":
        nrows = draw(st.integers(min_value=1, max_value=3))
        ncols = draw(st.integers(min_value=1, max_value=3))
        cells = tuple(draw(st.lists(labels, min_size=nrows * ncols, max_size=nrows * ncols)))
        return InputGrid(nrows, ncols, cells, draw(labels))

    def channel():
        return Fraction(draw(st.integers(0, 16)), 16)

    return ColorSelector(
        (channel(), channel(), channel()),
        draw(labels),
        draw(st.sampled_from(ColorWidget)),
        draw(st.booleans()),
    )


@st.composite
def normalized_panels(draw):
    """Panels whose layout covers every control, so round-trips are exact."""
    control_names = draw(st.lists(names, min_size=1, max_size=5, unique=True))
    controls = {name: draw(descriptors()) for name in control_names}
    zones = {"top": [], "bottom": [], "left": [], "right": []}
    for name in control_names:
        zones[draw(st.sampled_from(["top", "bottom", "left", "right"]))].append((name,))
    layout = LayoutSpec(**{z: tuple(rows) for z, rows in zones.items()})
    caption = draw(st.none() | st.text(max_size=10))
    return ControlPanel(controls, layout, caption)


@settings(max_examples=100)
@given(normalized_panels())
def test_form_spec_round_trip(panel):
    doc = json.loads(form_spec_json(panel))
    assert parse_form_spec(doc) == panel
