from __future__ import annotations

import pytest

from mathwikibase.nodes import (
    Fraction,
    Identifier,
    Number,
    Operator,
    Row,
    Script,
    Sqrt,
    Text,
    canonical_tex,
)
from mathwikibase.parser import (
    EmptyFormula,
    EmptyGroup,
    MissingScriptBase,
    UnbalancedBraces,
    UnexpectedEnd,
    parse,
    parse_tex,
)
from mathwikibase.tokenizer import tokenize

GRR = (
    "\\mbox{ch}(f_{\\mbox{!}}{\\mathcal F}^\\bullet)\\mbox{td}(Y)"
    " = f_* (\\mbox{ch}({\\mathcal F}^\\bullet) \\mbox{td}(X))"
)


def test_emc2_tree():
    ast = parse_tex("E=mc^2")
    assert ast.root == Row(
        (
            Identifier("E"),
            Operator("="),
            Identifier("m"),
            Script(base=Identifier("c"), sup=Number("2")),
        )
    )
    assert ast.source_tex == "E=mc^2"


def test_single_atom_has_no_row():
    assert parse_tex("x").root == Identifier("x")


def test_kinetic_fragment_tree():
    ast = parse_tex("\\frac12m_0v^2")
    assert ast.root == Row(
        (
            Fraction(Number("1"), Number("2")),
            Script(base=Identifier("m"), sub=Number("0")),
            Script(base=Identifier("v"), sup=Number("2")),
        )
    )


def test_braced_variant_normalizes_to_same_tree():
    assert parse_tex("{E}={m}{c}^{2}").root == parse_tex("E=mc^2").root


def test_frac_argument_forms_agree():
    assert parse_tex("\\frac{1}{2}").root == parse_tex("\\frac12").root
    assert parse_tex("\\frac ab").root == Fraction(Identifier("a"), Identifier("b"))
    assert parse_tex("\\frac1x").root == Fraction(Number("1"), Identifier("x"))


def test_frac_consumes_one_digit_from_a_run():
    ast = parse_tex("\\frac123")
    assert ast.root == Row((Fraction(Number("1"), Number("2")), Number("3")))


def test_structural_command_as_single_token_argument():
    assert parse_tex("\\sqrt\\frac12").root == Sqrt(Fraction(Number("1"), Number("2")))


def test_scripts_bind_to_preceding_atom():
    ast = parse_tex("ab^2")
    assert ast.root == Row(
        (Identifier("a"), Script(base=Identifier("b"), sup=Number("2")))
    )


def test_sub_and_sup_merge_on_one_base():
    assert parse_tex("x_i^2").root == Script(
        base=Identifier("x"), sub=Identifier("i"), sup=Number("2")
    )
    assert parse_tex("x^2_i").root == Script(
        base=Identifier("x"), sub=Identifier("i"), sup=Number("2")
    )


def test_repeated_superscript_nests():
    assert parse_tex("x^2^3").root == Script(
        base=Script(base=Identifier("x"), sup=Number("2")), sup=Number("3")
    )


def test_group_boundary_blocks_script_merging():
    # {x^2}_3 scripts the whole group, x^2_3 scripts the x
    grouped = parse_tex("{x^2}_3").root
    assert grouped == Script(
        base=Script(base=Identifier("x"), sup=Number("2")), sub=Number("3")
    )
    plain = parse_tex("x^2_3").root
    assert plain == Script(base=Identifier("x"), sub=Number("3"), sup=Number("2"))
    assert grouped != plain


def test_script_on_group_base_keeps_row():
    ast = parse_tex("{ab}^2")
    assert ast.root == Script(
        base=Row((Identifier("a"), Identifier("b"))), sup=Number("2")
    )


def test_mbox_collects_literal_text():
    assert parse_tex("\\mbox{ch}").root == Text("ch")
    assert parse_tex("\\mbox{speed of light}").root == Text("speed of light")
    assert parse_tex("\\mbox{!}").root == Text("!")
    assert parse_tex("\\mbox x").root == Text("x")


def test_mbox_inner_braces_group_without_printing():
    assert parse_tex("\\mbox{a{b}c}").root == Text("abc")
    assert parse_tex("\\mbox{a {b} c}").root == Text("a b c")


def test_mathcal_sets_variant():
    assert parse_tex("\\mathcal{F}").root == Identifier("F", variant="calligraphic")
    assert parse_tex("\\mathcal F").root == Identifier("F", variant="calligraphic")
    assert parse_tex("\\mathcal{AB}").root == Row(
        (
            Identifier("A", variant="calligraphic"),
            Identifier("B", variant="calligraphic"),
        )
    )


def test_mathcal_leaves_greek_alone():
    assert parse_tex("\\mathcal{\\alpha}").root == Identifier("alpha", variant="greek")


def test_greek_and_symbol_commands():
    assert parse_tex("\\alpha\\beta").root == Row(
        (Identifier("alpha", variant="greek"), Identifier("beta", variant="greek"))
    )
    assert parse_tex("a\\cdot b").root == Row(
        (Identifier("a"), Operator("\\cdot"), Identifier("b"))
    )


def test_unexpected_end_errors():
    for source in ["x^", "x_", "\\frac", "\\frac1", "\\sqrt", "\\mbox"]:
        with pytest.raises(UnexpectedEnd):
            parse_tex(source)


def test_unbalanced_braces_errors():
    with pytest.raises(UnbalancedBraces) as caught:
        parse_tex("{x")
    assert caught.value.offset == 0
    with pytest.raises(UnbalancedBraces) as caught:
        parse_tex("ab}c")
    assert caught.value.offset == 2
    with pytest.raises(UnbalancedBraces):
        parse_tex("\\mbox{ab")
    with pytest.raises(UnbalancedBraces):
        parse_tex("\\frac1}")


def test_empty_inputs_are_errors():
    with pytest.raises(EmptyFormula):
        parse_tex("")
    with pytest.raises(EmptyFormula):
        parse_tex("   ")
    with pytest.raises(EmptyGroup):
        parse_tex("{}")
    with pytest.raises(EmptyGroup):
        parse_tex("\\mbox{}")
    with pytest.raises(EmptyGroup):
        parse_tex("\\sqrt{}")


def test_script_mark_without_base():
    with pytest.raises(MissingScriptBase):
        parse_tex("^2")
    with pytest.raises(MissingScriptBase):
        parse_tex("\\frac^2 3")


def test_rows_are_normalized_after_parse():
    ast = parse_tex("{ab}c")
    assert ast.root == Row((Identifier("a"), Identifier("b"), Identifier("c")))
    for child in ast.root.children:
        assert not isinstance(child, Row)


def test_parse_without_source_string():
    ast = parse(tokenize("a+b"))
    assert ast.source_tex == ""
    assert canonical_tex(ast) == "a+b"


def test_landmark_formulas_parse():
    for source in ["E=mc^2", "\\frac12m_0v^2", GRR]:
        parse_tex(source)


def test_grr_display_shape():
    ast = parse_tex(GRR)
    root = ast.root
    assert isinstance(root, Row)
    assert root.children[0] == Text("ch")
    f_shriek = root.children[2]
    assert f_shriek == Script(base=Identifier("f"), sub=Text("!"))
    f_bullet = root.children[3]
    assert f_bullet == Script(
        base=Identifier("F", variant="calligraphic"), sup=Operator("\\bullet")
    )
    pushforward = root.children[10]
    assert pushforward == Script(base=Identifier("f"), sub=Operator("*"))


def test_corpus_round_trip(corpus):
    for source in corpus:
        first = parse_tex(source)
        second = parse_tex(canonical_tex(first))
        assert second.root == first.root, source
