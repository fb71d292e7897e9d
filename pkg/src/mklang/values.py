"""Runtime values of the toy language.

Integers, booleans, strings and nil are plain Python int/bool/str/None.
Everything else is one of the classes below. Identity (`==` in the
language) is Python object identity for reference types and value
equality for immediates; Symbols are interned so both coincide.
"""

from __future__ import annotations

_SYMBOLS: dict[str, "Symbol"] = {}


class Symbol(str):
    """Interned selector-like atom (`#foo`)."""

    __slots__ = ()
    is_symbol = True

    def __new__(cls, name):
        existing = _SYMBOLS.get(name)
        if existing is not None:
            return existing
        sym = super().__new__(cls, name)
        _SYMBOLS[name] = sym
        return sym


class Instance:
    """Ordinary object: a class reference plus named slots."""

    __slots__ = ("class_ref", "slots")

    def __init__(self, class_ref, slots):
        self.class_ref = class_ref
        self.slots = slots


class Array:
    """Growable ordered collection; also backs literal arrays."""

    __slots__ = ("class_ref", "items")

    def __init__(self, class_ref, items=None):
        self.class_ref = class_ref
        self.items = items if items is not None else []


class Block:
    """Closure over its defining activation."""

    __slots__ = ("node", "defining_activation", "hook_node")

    def __init__(self, node, defining_activation, hook_node=None):
        self.node = node
        self.defining_activation = defining_activation
        # Set when the closure was created from a woven (hooked) Block
        # node; links fire around each invocation.
        self.hook_node = hook_node

    @property
    def arity(self):
        return len(self.node.params)


class HostFunction:
    """Host-side callable exposed as a language value.

    Answers any selector by calling `fn(*args)`. Used by tools and tests
    to observe triggers without writing meta-behavior in the toy language.
    """

    __slots__ = ("fn", "label")

    def __init__(self, fn, label="a HostFunction"):
        self.fn = fn
        self.label = label


def identical(a, b) -> bool:
    """Language-level identity (`==`)."""
    if isinstance(a, (Instance, Array, Block, HostFunction)) or \
            isinstance(b, (Instance, Array, Block, HostFunction)):
        return a is b
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if a is None or b is None:
        return a is b
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    if isinstance(a, Symbol) or isinstance(b, Symbol):
        return a is b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    return a is b
