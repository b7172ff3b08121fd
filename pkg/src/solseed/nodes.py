"""Syntax tree nodes.

Nodes carry exact source spans and a small, closed set of kinds; anything
the grammar subset does not model becomes ``OTHER`` with a correct span so
that pattern matchers can never fire on a misparse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterator, Optional

from .source import Span


class NodeKind(Enum):
    CONTRACT_DEF = "ContractDef"
    FUNCTION_DEF = "FunctionDef"
    MODIFIER_DEF = "ModifierDef"
    CONSTRUCTOR_DEF = "ConstructorDef"
    VARIABLE_DECLARATION_STMT = "VariableDeclarationStmt"
    EXPRESSION_STMT = "ExpressionStmt"
    IF_STMT = "IfStmt"
    FOR_STMT = "ForStmt"
    WHILE_STMT = "WhileStmt"
    REQUIRE_CALL = "RequireCall"
    ASSERT_CALL = "AssertCall"
    FUNCTION_CALL = "FunctionCall"
    MEMBER_ACCESS = "MemberAccess"
    BINARY_OP = "BinaryOp"
    ASSIGNMENT = "Assignment"
    IDENTIFIER = "Identifier"
    BLOCK = "Block"
    RETURN_STMT = "ReturnStmt"
    EMIT_STMT = "EmitStmt"
    ASSEMBLY_BLOCK = "AssemblyBlock"
    OTHER = "Other"


# Kinds that open a lexical scope; Identifier scope chains are built from
# the ids of these ancestors.
SCOPE_KINDS = frozenset(
    {
        NodeKind.BLOCK,
        NodeKind.FUNCTION_DEF,
        NodeKind.MODIFIER_DEF,
        NodeKind.CONSTRUCTOR_DEF,
        NodeKind.CONTRACT_DEF,
    }
)


@dataclass
class AstNode:
    kind: NodeKind
    span: Span
    children: list["AstNode"] = field(default_factory=list)
    attrs: dict[str, Any] = field(default_factory=dict)
    node_id: int = -1
    parent: Optional["AstNode"] = field(default=None, repr=False, compare=False)

    def walk(self) -> Iterator["AstNode"]:
        """Depth-first, source-order traversal including self."""
        yield self
        for child in self.children:
            yield from child.walk()

    def ancestors(self) -> Iterator["AstNode"]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def scope_chain(self) -> tuple[int, ...]:
        """Ids of enclosing scope nodes, innermost first."""
        return tuple(a.node_id for a in self.ancestors() if a.kind in SCOPE_KINDS)

    def enclosing(self, *kinds: NodeKind) -> Optional["AstNode"]:
        for a in self.ancestors():
            if a.kind in kinds:
                return a
        return None


def find_nodes(tree: AstNode, predicate: Callable[[AstNode], bool]) -> list[AstNode]:
    """All nodes matching ``predicate`` in depth-first source order."""
    return [node for node in tree.walk() if predicate(node)]


@dataclass(frozen=True)
class Diagnostic:
    span: Span
    message: str


class ParseStatus(Enum):
    PARSED = "Parsed"
    INVALID = "Invalid"


@dataclass
class ParseOutcome:
    status: ParseStatus
    tree: AstNode | None = None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status is ParseStatus.PARSED
