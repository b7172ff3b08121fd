import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solseed import NodeKind, ParseStatus, SourceFile, find_nodes, parse, parse_text
from solseed.lexer import LexError, tokenize
from solseed.parser import scope_identifiers
from support import parse_fixture, tree_shape

from conftest import CORPUS, LISTINGS

ALL_FIXTURES = sorted(
    p
    for p in list(CORPUS.glob("*.sol")) + list(LISTINGS.glob("*.sol"))
    if p.name != "metadata_blob.sol"
)


# -- lexer ---------------------------------------------------------------


def test_string_semicolons_stay_in_one_token():
    toks = tokenize('x = f("a;b");')
    strings = [t for t in toks if t.kind == "string"]
    assert [t.text for t in strings] == ['"a;b"']
    assert sum(1 for t in toks if t.text == ";") == 1


def test_token_spans_cover_exact_source():
    text = 'require(msg.sender.call.value(amount)());  // check\nuint x = 0x1F;'
    for tok in tokenize(text):
        assert text[tok.start : tok.end] == tok.text


@pytest.mark.parametrize(
    "bad,message",
    [
        ('"unterminated', "unterminated string"),
        ("/* never closed", "unterminated block comment"),
    ],
)
def test_lex_errors(bad, message):
    with pytest.raises(LexError, match=message):
        tokenize(bad)


def test_hex_literal_and_number_units():
    toks = tokenize('hex"00ff" 1 ether 0.1 ether 2e10')
    assert toks[0].kind == "string" and toks[0].text == 'hex"00ff"'
    kinds = [t.kind for t in toks[1:-1]]
    assert kinds == ["number", "ident", "number", "ident", "number"]


# -- parse status ----------------------------------------------------------


def test_json_blob_is_invalid_with_diagnostic():
    outcome = parse_text('{"name":"C","abi":[]}')
    assert outcome.status is ParseStatus.INVALID
    assert len(outcome.diagnostics) >= 1


def test_empty_file_parses_with_no_contracts():
    outcome = parse_text("")
    assert outcome.ok
    assert [c for c in outcome.tree.children if c.kind is NodeKind.CONTRACT_DEF] == []


def test_invalid_corpus_fixture():
    src = SourceFile.read(CORPUS / "metadata_blob.sol")
    assert parse(src).status is ParseStatus.INVALID


@pytest.mark.parametrize("path", ALL_FIXTURES, ids=lambda p: p.name)
def test_all_fixtures_parse(path):
    src = SourceFile.read(path)
    outcome = parse(src)
    assert outcome.ok, outcome.diagnostics


def test_legacy_constructs_parse():
    legacy = """
    contract Old {
        function Old() public { owner = msg.sender; }
        function go(uint amount) public {
            if (!msg.sender.call.value(amount)()) { throw; }
            var leftovers = amount;
        }
    }
    """
    assert parse_text(legacy).ok


def test_new_style_call_options_parse():
    outcome = parse_text(
        'contract C { function f(address a) public { require(a.call{value: 1}("")); } }'
    )
    assert outcome.ok
    options = find_nodes(
        outcome.tree,
        lambda n: n.kind is NodeKind.OTHER and n.attrs.get("construct") == "call_options",
    )
    assert len(options) == 1


def test_uc_listing_call_chain_shape(listings_dir):
    _, tree = parse_fixture(listings_dir / "uc_before.sol")
    stmts = find_nodes(tree, lambda n: n.kind is NodeKind.EXPRESSION_STMT)
    assert len(stmts) == 1
    members = find_nodes(
        stmts[0], lambda n: n.kind is NodeKind.MEMBER_ACCESS
    )
    assert {m.attrs["member"] for m in members} >= {"call", "value"}


# -- span invariants --------------------------------------------------------


@pytest.mark.parametrize("path", ALL_FIXTURES, ids=lambda p: p.name)
def test_span_round_trip_and_containment(path):
    src, tree = parse_fixture(path)
    for node in tree.walk():
        assert 0 <= node.span.start <= node.span.end <= len(src.text)
        # slicing the file by the span must reproduce the node's source
        assert src.slice(node.span) == src.text[node.span.start : node.span.end]
        previous_end = None
        for child in node.children:
            assert node.span.contains(child.span), (node.kind, child.kind)
            if previous_end is not None:
                assert child.span.start >= previous_end, "siblings out of order"
            previous_end = child.span.end


@pytest.mark.parametrize("path", ALL_FIXTURES, ids=lambda p: p.name)
def test_parse_is_deterministic(path):
    src = SourceFile.read(path)
    first = parse(src)
    second = parse(SourceFile(path=src.path, text=src.text))
    assert tree_shape(first.tree) == tree_shape(second.tree)


def test_identifier_scope_chains_are_recorded():
    src, tree = parse_fixture(CORPUS / "shadowing.sol")
    idents = find_nodes(tree, lambda n: n.kind is NodeKind.IDENTIFIER)
    assert idents
    for ident in idents:
        chain = ident.scope_chain()
        assert chain, "identifier without enclosing scope"
        kinds = {a.node_id: a.kind for a in ident.ancestors()}
        assert all(
            kinds[i]
            in (
                NodeKind.BLOCK,
                NodeKind.FUNCTION_DEF,
                NodeKind.MODIFIER_DEF,
                NodeKind.CONSTRUCTOR_DEF,
                NodeKind.CONTRACT_DEF,
            )
            for i in chain
        )


# -- find_nodes ----------------------------------------------------------------


def test_find_nodes_send_member_on_us_listing(listings_dir):
    _, tree = parse_fixture(listings_dir / "us_before.sol")
    sends = find_nodes(
        tree,
        lambda n: n.kind is NodeKind.MEMBER_ACCESS and n.attrs.get("member") == "send",
    )
    assert len(sends) == 1


def test_find_nodes_nothing_matches(listings_dir):
    _, tree = parse_fixture(listings_dir / "us_before.sol")
    assert find_nodes(tree, lambda n: n.kind is NodeKind.ASSEMBLY_BLOCK) == []


def test_find_nodes_msg_identifiers_on_tx_listing(listings_dir):
    # hand count: the listing mentions msg exactly once
    _, tree = parse_fixture(listings_dir / "tx_before.sol")
    msgs = find_nodes(
        tree,
        lambda n: n.kind is NodeKind.IDENTIFIER and n.attrs.get("name") == "msg",
    )
    assert len(msgs) == 1


def test_find_nodes_depth_first_source_order():
    src, tree = parse_fixture(CORPUS / "wallet_legacy.sol")
    nodes = find_nodes(tree, lambda n: n.kind is NodeKind.EXPRESSION_STMT)
    starts = [n.span.start for n in nodes]
    assert starts == sorted(starts)


# -- scope_identifiers -----------------------------------------------------------


def test_parameter_is_in_scope():
    outcome = parse_text(
        "contract C { function f(uint i) public { uint j = i; } }"
    )
    decl = find_nodes(
        outcome.tree, lambda n: n.kind is NodeKind.VARIABLE_DECLARATION_STMT
    )[-1]
    assert "i" in scope_identifiers(decl)


def test_dtu_listing_scope_contains_parameter(listings_dir):
    _, tree = parse_fixture(listings_dir / "dtu_before.sol")
    calls = find_nodes(tree, lambda n: n.kind is NodeKind.FUNCTION_CALL)
    inner = max(calls, key=lambda n: n.span.start)
    assert "_address" in scope_identifiers(inner)


def test_shadowing_fixture_scope_set_hand_enumerated():
    src, tree = parse_fixture(CORPUS / "shadowing.sol")
    target = find_nodes(
        tree,
        lambda n: n.kind is NodeKind.EXPRESSION_STMT
        and src.slice(n.span) == "value = deep;",
    )
    assert len(target) == 1
    assert scope_identifiers(target[0]) == {
        "deep",
        "step",
        "inner",
        "value",
        "seed",
        "compute",
        "owner",
        "Outer",
    }


def test_inherited_contract_names_visible(corpus_dir):
    src, tree = parse_fixture(corpus_dir / "inherited.sol")
    stmts = find_nodes(
        tree,
        lambda n: n.kind is NodeKind.EXPRESSION_STMT
        and src.slice(n.span) == "total = add(total, amount);",
    )
    names = scope_identifiers(stmts[0])
    assert {"SafeMathBase", "Accumulator", "total", "add", "amount"} <= names


# -- property: random sub-slices never break containment ---------------------------


@settings(max_examples=30, deadline=None)
@given(index=st.integers(min_value=0, max_value=10_000))
def test_containment_random_node_sampling(index):
    src = SourceFile.read(CORPUS / "wallet_legacy.sol")
    tree = parse(src).tree
    nodes = list(tree.walk())
    node = nodes[index % len(nodes)]
    for child in node.children:
        assert node.span.contains(child.span)


def test_unicode_text_spans_round_trip():
    src = SourceFile.read(CORPUS / "nonascii_comment.sol")
    outcome = parse(src)
    assert outcome.ok
    for node in outcome.tree.walk():
        assert src.slice(node.span) == src.text[node.span.start : node.span.end]
    # the non-ascii comment must not shift any statement span
    stmt = find_nodes(
        outcome.tree,
        lambda n: n.kind is NodeKind.EXPRESSION_STMT
        and "transfer" in src.slice(n.span),
    )
    assert stmt and src.slice(stmt[0].span) == "msg.sender.transfer(this.balance);"
