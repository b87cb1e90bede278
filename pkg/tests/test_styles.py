"""Style string parsing and emission."""

from dwt.mxgraph.model import StyleMap


def test_key_value_roundtrip() -> None:
    style = StyleMap.parse("rounded=1;fillColor=#DAE8FC;")
    assert style.to_string() == "rounded=1;fillColor=#DAE8FC;"
    assert style.get("fillColor") == "#DAE8FC"
    assert style.base_shape == "rounded"


def test_leading_token() -> None:
    style = StyleMap.parse("ellipse;whiteSpace=wrap;html=1;")
    assert style.token == "ellipse"
    assert style.base_shape == "ellipse"
    assert style.to_string() == "ellipse;whiteSpace=wrap;html=1;"


def test_shape_key_resolves_base_shape() -> None:
    style = StyleMap.parse("shape=cylinder;fillColor=#FFF;")
    assert style.base_shape == "cylinder"


def test_no_trailing_semicolon_preserved() -> None:
    style = StyleMap.parse("rounded=1;fillColor=#fff")
    assert style.trailing_semicolon is False
    assert style.to_string() == "rounded=1;fillColor=#fff"


def test_duplicate_keys_collapse_last_wins() -> None:
    style = StyleMap.parse("fillColor=#111;rounded=1;fillColor=#222;")
    assert style.get("fillColor") == "#222"
    assert style.duplicate_keys == ("fillColor",)
    # first-occurrence position, last value
    assert style.to_string() == "fillColor=#222;rounded=1;"


def test_duplicates_do_not_affect_equality() -> None:
    a = StyleMap.parse("fillColor=#222;rounded=1;")
    b = StyleMap.parse("fillColor=#111;rounded=1;fillColor=#222;")
    assert a == b


def test_empty_style() -> None:
    style = StyleMap.parse("")
    assert style.is_empty
    assert style.to_string() == ""
    assert style.base_shape is None


def test_bare_flag_entry() -> None:
    style = StyleMap.parse("group;connectable;html=1;")
    assert style.token == "group"
    assert style.get("connectable") == ""
    assert style.to_string() == "group;connectable;html=1;"
