"""The six pattern-based vulnerability-injecting operators.

Each operator is a matcher (tree -> mutation sites) plus a transformer
(site -> edit set); one site yields exactly one first-order mutant. All
matching is structural: a site's anchor is a syntax node, its edits are
node spans, and injected names are checked against the visible scope so
rewrites can neither truncate statements nor collide with existing
variables.

Operators:
  UC  drop the require/if/assert check around a low-level ``.call``
  US  drop the check around ``.send``
  TX  swap ``msg.sender`` for ``tx.origin`` in ``==``/``!=`` comparisons
  UR  discard the assigned result of a function call
  CL  wrap call/send/transfer statements in a bounded ``for`` loop
  DTU route ``delegatecall`` through a user-settable address
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .nodes import AstNode, NodeKind
from .parser import contract_member_names, declared_names_within, scope_identifiers
from .rewrite import EditSet, fresh_name
from .source import SourceFile, Span


class OperatorId(Enum):
    UC = "UC"
    US = "US"
    TX = "TX"
    UR = "UR"
    CL = "CL"
    DTU = "DTU"


OPERATOR_ORDER: tuple[OperatorId, ...] = (
    OperatorId.UC,
    OperatorId.US,
    OperatorId.TX,
    OperatorId.UR,
    OperatorId.CL,
    OperatorId.DTU,
)


@dataclass
class OperatorConfig:
    cl_loop_bound: int = 1000
    cl_skip_inside_loop: bool = False
    enabled: frozenset[OperatorId] = field(default_factory=lambda: frozenset(OPERATOR_ORDER))

    def __post_init__(self) -> None:
        if self.cl_loop_bound < 1:
            raise ValueError("cl_loop_bound must be >= 1")
        if isinstance(self.enabled, (list, tuple, set)):
            self.enabled = frozenset(self.enabled)


@dataclass
class MutationSite:
    """One matched pattern occurrence.

    ``anchor`` is the node witnessing the pattern; ``anchor_span`` is the
    region the transformer rewrites (for DTU that is the receiver
    expression, a sub-span of the anchor call).
    """

    operator: OperatorId
    file: str
    anchor: AstNode
    anchor_span: Span
    line: int
    original_snippet: str
    ordinal: int = 0


# -- shared structural helpers -------------------------------------------------


def call_chain_member(call: AstNode) -> AstNode | None:
    """The member access a call chain bottoms out at.

    Walks through curried calls (``a.call.value(x)()``), call options
    (``a.call{value: x}("")``) and ``.value``/``.gas`` legs.
    """
    if call.kind not in (NodeKind.FUNCTION_CALL, NodeKind.REQUIRE_CALL, NodeKind.ASSERT_CALL):
        return None
    node = call.children[0]
    while True:
        if node.kind is NodeKind.FUNCTION_CALL:
            node = node.children[0]
        elif node.kind is NodeKind.OTHER and node.attrs.get("construct") == "call_options":
            node = node.children[0]
        elif node.kind is NodeKind.MEMBER_ACCESS and node.attrs.get("member") in ("value", "gas"):
            node = node.children[0]
        else:
            break
    return node if node.kind is NodeKind.MEMBER_ACCESS else None


def _chain_member_name(expr: AstNode) -> str | None:
    member = call_chain_member(expr)
    return member.attrs.get("member") if member is not None else None


def _callee_root(call: AstNode) -> AstNode:
    node = call.children[0]
    while True:
        if node.kind is NodeKind.FUNCTION_CALL:
            node = node.children[0]
        elif node.kind is NodeKind.OTHER and node.attrs.get("construct") == "call_options":
            node = node.children[0]
        else:
            return node


def _strip_not(expr: AstNode) -> tuple[AstNode, bool]:
    """Peel one leading ``!``; returns (expression, was_negated)."""
    if (
        expr.kind is NodeKind.OTHER
        and expr.attrs.get("construct") == "unary"
        and expr.attrs.get("op") == "!"
        and expr.attrs.get("prefix")
    ):
        return expr.children[0], True
    return expr, False


def _is_abort_statement(stmt: AstNode) -> bool:
    if stmt.kind is NodeKind.OTHER and stmt.attrs.get("construct") == "throw":
        return True
    if stmt.kind is NodeKind.EXPRESSION_STMT:
        expr = stmt.children[0]
        if expr.kind is NodeKind.FUNCTION_CALL:
            root = expr.children[0]
            if root.kind is NodeKind.IDENTIFIER and root.attrs.get("name") == "revert":
                return True
        return False
    if stmt.kind is NodeKind.RETURN_STMT:
        if not stmt.children:
            return False
        value = stmt.children[0]
        return value.kind is NodeKind.OTHER and value.attrs.get("value") == "false"
    if stmt.kind is NodeKind.BLOCK:
        return bool(stmt.children) and all(_is_abort_statement(s) for s in stmt.children)
    return False


def _statement_anchor(node: AstNode) -> AstNode | None:
    """The innermost enclosing node in statement position (child of a Block)."""
    cur = node
    while cur.parent is not None:
        if cur.parent.kind is NodeKind.BLOCK:
            return cur
        cur = cur.parent
    return None


def _inside(node: AstNode, *kinds: NodeKind) -> bool:
    return node.enclosing(*kinds) is not None


def _make_site(
    operator: OperatorId, src: SourceFile, anchor: AstNode, span: Span
) -> MutationSite:
    return MutationSite(
        operator=operator,
        file=src.path,
        anchor=anchor,
        anchor_span=span,
        line=src.byte_to_line(span.start),
        original_snippet=src.slice(span),
    )


def _number_sites(sites: list[MutationSite]) -> list[MutationSite]:
    sites.sort(key=lambda s: (s.anchor_span.start, s.anchor_span.end))
    for i, site in enumerate(sites, start=1):
        site.ordinal = i
    return sites


# -- UC / US: drop the check around .call / .send ------------------------------


def _match_checked_call(
    operator: OperatorId, tree: AstNode, src: SourceFile, member: str
) -> list[MutationSite]:
    sites: list[MutationSite] = []
    for node in tree.walk():
        if node.kind is NodeKind.EXPRESSION_STMT:
            call = node.children[0]
            if call.kind in (NodeKind.REQUIRE_CALL, NodeKind.ASSERT_CALL):
                if len(call.children) >= 2 and _chain_member_name(call.children[1]) == member:
                    sites.append(_make_site(operator, src, node, node.span))
        elif node.kind is NodeKind.IF_STMT and not node.attrs.get("has_else"):
            cond, _ = _strip_not(node.children[0])
            if _chain_member_name(cond) == member and _is_abort_statement(node.children[1]):
                sites.append(_make_site(operator, src, node, node.span))
    return _number_sites(sites)


def _checked_call_expr(site: MutationSite) -> AstNode:
    anchor = site.anchor
    if anchor.kind is NodeKind.EXPRESSION_STMT:
        return anchor.children[0].children[1]
    cond, _ = _strip_not(anchor.children[0])
    return cond


def _transform_checked_call(site: MutationSite, src: SourceFile) -> EditSet:
    call = _checked_call_expr(site)
    edit_set = EditSet(site_id=f"{site.operator.value}-{site.ordinal}")
    edit_set.add(site.anchor_span, src.slice(call.span) + ";")
    return edit_set


def match_uc(tree: AstNode, src: SourceFile) -> list[MutationSite]:
    """Checked low-level ``.call`` sites: require/assert-wrapped or
    abort-only if-wrapped."""
    return _match_checked_call(OperatorId.UC, tree, src, "call")


def transform_uc(site: MutationSite, src: SourceFile) -> EditSet:
    """``require(E);`` / ``if (!E) { abort }`` becomes the bare ``E;``."""
    return _transform_checked_call(site, src)


def match_us(tree: AstNode, src: SourceFile) -> list[MutationSite]:
    """Checked ``.send`` sites, same shapes as UC."""
    return _match_checked_call(OperatorId.US, tree, src, "send")


def transform_us(site: MutationSite, src: SourceFile) -> EditSet:
    return _transform_checked_call(site, src)


# -- TX: msg.sender -> tx.origin in ownership comparisons ------------------------


def _is_msg_sender(node: AstNode) -> bool:
    return (
        node.kind is NodeKind.MEMBER_ACCESS
        and node.attrs.get("member") == "sender"
        and node.children[0].kind is NodeKind.IDENTIFIER
        and node.children[0].attrs.get("name") == "msg"
    )


def match_tx(tree: AstNode, src: SourceFile) -> list[MutationSite]:
    """Each ``msg.sender`` operand of an ``==``/``!=`` comparison."""
    sites: list[MutationSite] = []
    for node in tree.walk():
        if not _is_msg_sender(node):
            continue
        parent = node.parent
        if (
            parent is not None
            and parent.kind is NodeKind.BINARY_OP
            and parent.attrs.get("op") in ("==", "!=")
        ):
            sites.append(_make_site(OperatorId.TX, src, node, node.span))
    return _number_sites(sites)


def transform_tx(site: MutationSite, src: SourceFile) -> EditSet:
    edit_set = EditSet(site_id=f"TX-{site.ordinal}")
    edit_set.add(site.anchor_span, "tx.origin")
    return edit_set


# -- UR: discard the assigned result of a call -----------------------------------


def _is_plain_function_call(expr: AstNode) -> bool:
    """A call whose callee chain bottoms out at a name (no casts, no new)."""
    if expr.kind is not NodeKind.FUNCTION_CALL:
        return False
    root = _callee_root(expr)
    return root.kind in (NodeKind.IDENTIFIER, NodeKind.MEMBER_ACCESS)


def match_ur(tree: AstNode, src: SourceFile) -> list[MutationSite]:
    """``lhs = f(args);`` statements and ``T v = f(args);`` declarations."""
    sites: list[MutationSite] = []
    for node in tree.walk():
        if node.parent is None or node.parent.kind is not NodeKind.BLOCK:
            continue
        if node.kind is NodeKind.EXPRESSION_STMT:
            expr = node.children[0]
            if (
                expr.kind is NodeKind.ASSIGNMENT
                and expr.attrs.get("op") == "="
                and not (
                    expr.children[0].kind is NodeKind.OTHER
                    and expr.children[0].attrs.get("construct") == "tuple"
                )
                and _is_plain_function_call(expr.children[1])
            ):
                sites.append(_make_site(OperatorId.UR, src, node, node.span))
        elif node.kind is NodeKind.VARIABLE_DECLARATION_STMT:
            if (
                node.children
                and node.attrs.get("eq_offset") is not None
                and node.attrs.get("type_text") != "var"
                and _is_plain_function_call(node.children[0])
            ):
                sites.append(_make_site(OperatorId.UR, src, node, node.span))
    return _number_sites(sites)


def transform_ur(site: MutationSite, src: SourceFile) -> EditSet:
    anchor = site.anchor
    edit_set = EditSet(site_id=f"UR-{site.ordinal}")
    if anchor.kind is NodeKind.EXPRESSION_STMT:
        rhs = anchor.children[0].children[1]
        edit_set.add(site.anchor_span, src.slice(rhs.span) + ";")
    else:
        init = anchor.children[0]
        head = src.text[anchor.span.start : anchor.attrs["eq_offset"]].rstrip()
        edit_set.add(site.anchor_span, f"{head};\n{src.slice(init.span)};")
    return edit_set


# -- CL: wrap transfer-family statements in a loop ---------------------------------


_TRANSFER_MEMBERS = frozenset({"call", "send", "transfer"})


def match_cl(
    tree: AstNode, src: SourceFile, cfg: OperatorConfig | None = None
) -> list[MutationSite]:
    """One site per statement containing a call/send/transfer invocation."""
    cfg = cfg or OperatorConfig()
    anchors: dict[int, AstNode] = {}
    for node in tree.walk():
        if node.kind is not NodeKind.FUNCTION_CALL:
            continue
        if _chain_member_name(node) not in _TRANSFER_MEMBERS:
            continue
        if cfg.cl_skip_inside_loop and _inside(node, NodeKind.FOR_STMT, NodeKind.WHILE_STMT):
            continue
        anchor = _statement_anchor(node)
        if anchor is not None:
            anchors.setdefault(anchor.node_id, anchor)
    sites = [
        _make_site(OperatorId.CL, src, anchor, anchor.span)
        for anchor in anchors.values()
    ]
    return _number_sites(sites)


def transform_cl(site: MutationSite, src: SourceFile, cfg: OperatorConfig) -> EditSet:
    taken = scope_identifiers(site.anchor) | declared_names_within(site.anchor)
    var = fresh_name("i", taken)
    stmt = src.slice(site.anchor_span)
    body = "\n".join("    " + line for line in stmt.split("\n"))
    loop = (
        f"for (uint256 {var} = 1; {var} <= {cfg.cl_loop_bound}; {var}++) {{\n"
        f"{body}\n"
        f"}}"
    )
    edit_set = EditSet(site_id=f"CL-{site.ordinal}")
    edit_set.add(site.anchor_span, loop)
    return edit_set


# -- DTU: route delegatecall through a settable address ------------------------------


def match_dtu(tree: AstNode, src: SourceFile) -> list[MutationSite]:
    """``delegatecall`` invocations outside constructors; the rewritten
    span is the receiver expression."""
    sites: list[MutationSite] = []
    for node in tree.walk():
        if node.kind is not NodeKind.FUNCTION_CALL:
            continue
        member = call_chain_member(node)
        if member is None or member.attrs.get("member") != "delegatecall":
            continue
        if _inside(node, NodeKind.CONSTRUCTOR_DEF):
            continue
        if node.enclosing(NodeKind.CONTRACT_DEF) is None:
            continue
        receiver = member.children[0]
        sites.append(_make_site(OperatorId.DTU, src, node, receiver.span))
    return _number_sites(sites)


def transform_dtu(site: MutationSite, src: SourceFile) -> EditSet:
    contract = site.anchor.enclosing(NodeKind.CONTRACT_DEF)
    assert contract is not None
    taken = contract_member_names(contract) | declared_names_within(contract)
    taken |= {
        n.attrs["name"] for n in contract.walk() if n.kind is NodeKind.IDENTIFIER
    }
    name = fresh_name("delegate", taken)
    while f"set{name[0].upper()}{name[1:]}" in taken or f"_{name}" in taken:
        taken.add(name)
        name = fresh_name("delegate", taken)
    setter = f"set{name[0].upper()}{name[1:]}"

    indent = _member_indent(site.anchor, src)
    lines = [
        f"address public {name};",
        f"function {setter}(address _{name}) public {{",
        f"    {name} = _{name};",
        f"}}",
    ]
    insertion = "\n" + "\n".join(indent + line for line in lines)

    edit_set = EditSet(site_id=f"DTU-{site.ordinal}")
    body_start = contract.attrs["body_start"]
    edit_set.add(Span(body_start, body_start), insertion)
    edit_set.add(site.anchor_span, name)
    return edit_set


def _member_indent(node: AstNode, src: SourceFile) -> str:
    enclosing = node.enclosing(
        NodeKind.FUNCTION_DEF, NodeKind.MODIFIER_DEF, NodeKind.CONSTRUCTOR_DEF
    )
    if enclosing is not None:
        return src.indent_at(enclosing.span.start)
    return "    "


# -- registry -----------------------------------------------------------------------

Matcher = Callable[[AstNode, SourceFile], list[MutationSite]]

MATCHERS: dict[OperatorId, Matcher] = {
    OperatorId.UC: match_uc,
    OperatorId.US: match_us,
    OperatorId.TX: match_tx,
    OperatorId.UR: match_ur,
    OperatorId.CL: match_cl,
    OperatorId.DTU: match_dtu,
}


def match_all(
    tree: AstNode, src: SourceFile, cfg: OperatorConfig
) -> dict[OperatorId, list[MutationSite]]:
    """Run every enabled matcher; sites per operator in source order."""
    result: dict[OperatorId, list[MutationSite]] = {}
    for op in OPERATOR_ORDER:
        if op not in cfg.enabled:
            continue
        if op is OperatorId.CL:
            result[op] = match_cl(tree, src, cfg)
        else:
            result[op] = MATCHERS[op](tree, src)
    return result


def transform(site: MutationSite, src: SourceFile, cfg: OperatorConfig) -> EditSet:
    """Dispatch a site to its operator's transformer."""
    if site.operator is OperatorId.UC:
        return transform_uc(site, src)
    if site.operator is OperatorId.US:
        return transform_us(site, src)
    if site.operator is OperatorId.TX:
        return transform_tx(site, src)
    if site.operator is OperatorId.UR:
        return transform_ur(site, src)
    if site.operator is OperatorId.CL:
        return transform_cl(site, src, cfg)
    if site.operator is OperatorId.DTU:
        return transform_dtu(site, src)
    raise ValueError(f"unknown operator {site.operator}")


def matches_pattern(site: MutationSite, tree: AstNode, src: SourceFile) -> bool:
    """Re-check that a site's anchor still satisfies its operator's shape
    predicate (used by campaign validation, step 3)."""
    matcher = MATCHERS[site.operator]
    fresh = matcher(tree, src)
    return any(
        s.anchor_span == site.anchor_span and s.ordinal == site.ordinal for s in fresh
    )
