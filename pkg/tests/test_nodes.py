from __future__ import annotations

import random

from mathwikibase.nodes import (
    FormulaAst,
    Fraction,
    Identifier,
    Number,
    Operator,
    Row,
    Script,
    Sqrt,
    Text,
    canonical_hash,
    canonical_tex,
    children,
    count_nodes,
    fnv1a_64,
    node_at,
    normalize,
)

from generators import random_formula


def test_children_enumeration():
    script = Script(base=Identifier("x"), sub=Number("1"), sup=Number("2"))
    assert children(script) == (Identifier("x"), Number("1"), Number("2"))
    sup_only = Script(base=Identifier("x"), sup=Number("2"))
    assert children(sup_only) == (Identifier("x"), Number("2"))
    frac = Fraction(Number("1"), Number("2"))
    assert children(frac) == (Number("1"), Number("2"))
    assert children(Identifier("x")) == ()
    assert children(Sqrt(Identifier("y"))) == (Identifier("y"),)
    assert children(Text("ch")) == ()


def test_node_at_walks_paths():
    tree = Row((Identifier("a"), Script(base=Identifier("b"), sup=Number("2"))))
    assert node_at(tree, ()) is tree
    assert node_at(tree, (0,)) == Identifier("a")
    assert node_at(tree, (1, 0)) == Identifier("b")
    assert node_at(tree, (1, 1)) == Number("2")


def test_normalize_flattens_nested_rows():
    nested = FormulaAst(
        Row((Row((Identifier("a"), Identifier("b"))), Identifier("c")))
    )
    flat = normalize(nested)
    assert flat.root == Row((Identifier("a"), Identifier("b"), Identifier("c")))


def test_normalize_unwraps_single_child_rows():
    wrapped = FormulaAst(Row((Row((Identifier("x"),)),)))
    assert normalize(wrapped).root == Identifier("x")


def test_normalize_descends_into_arguments():
    ast = FormulaAst(
        Fraction(Row((Identifier("a"),)), Sqrt(Row((Row((Number("1"), Number("2"))),))))
    )
    normal = normalize(ast)
    assert normal.root == Fraction(
        Identifier("a"), Sqrt(Row((Number("1"), Number("2"))))
    )


def test_normalize_idempotent_on_random_trees():
    rng = random.Random(20260823)
    for _ in range(1000):
        ast = FormulaAst(root=random_formula(rng, 30).root)
        once = normalize(ast)
        assert normalize(once) == once
        assert count_nodes(once.root) <= 30


def test_canonical_tex_examples():
    row = Row(
        (
            Identifier("E"),
            Operator("="),
            Identifier("m"),
            Script(base=Identifier("c"), sup=Number("2")),
        )
    )
    assert canonical_tex(row) == "E=mc^{2}"
    assert canonical_tex(Identifier("x")) == "x"
    assert canonical_tex(Fraction(Number("1"), Number("2"))) == "\\frac{1}{2}"


def test_canonical_tex_braces_all_arguments():
    assert canonical_tex(Sqrt(Identifier("x"))) == "\\sqrt{x}"
    assert (
        canonical_tex(Script(base=Identifier("x"), sub=Identifier("i"), sup=Number("2")))
        == "x_{i}^{2}"
    )
    row_base = Script(base=Row((Identifier("a"), Identifier("b"))), sup=Number("2"))
    assert canonical_tex(row_base) == "{ab}^{2}"


def test_canonical_tex_control_words_keep_one_trailing_space():
    assert canonical_tex(Identifier("alpha", variant="greek")) == "\\alpha "
    assert canonical_tex(Operator("\\cdot")) == "\\cdot "
    assert canonical_tex(Identifier("F", variant="calligraphic")) == "\\mathcal{F}"
    assert canonical_tex(Text("ch")) == "\\mbox{ch}"


def test_canonical_tex_concatenates_over_rows():
    # a row's serialization is exactly its children's serializations joined
    row = Row(
        (
            Identifier("alpha", variant="greek"),
            Operator("\\cdot"),
            Fraction(Number("1"), Number("2")),
        )
    )
    joined = "".join(canonical_tex(child) for child in row.children)
    assert canonical_tex(row) == joined


def test_fnv1a_64_reference_vector():
    # published FNV-1a 64 test vector
    assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a_64(b"") == 0xCBF29CE484222325


def test_canonical_hash_values_frozen():
    assert canonical_hash(FormulaAst(Identifier("x"))) == 0xAF63F54C86021707
    assert canonical_hash(Identifier("x")) == fnv1a_64(b"x")


def test_canonical_hash_normalizes_first():
    plain = FormulaAst(Identifier("x"))
    wrapped = FormulaAst(Row((Row((Identifier("x"),)),)))
    assert canonical_hash(plain) == canonical_hash(wrapped)


def test_canonical_hash_distinguishes_close_formulas():
    two = Row((Identifier("E"), Operator("="), Number("2")))
    three = Row((Identifier("E"), Operator("="), Number("3")))
    assert canonical_hash(two) != canonical_hash(three)
