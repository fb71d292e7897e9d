"""Builtin classes and methods.

Most of the kernel is host primitives; a small part (printing helpers,
counting loops) is written in the language itself so that those methods
have real ASTs and can carry links like any user method.
"""

from __future__ import annotations

from .errors import MkRuntimeError
from .interpreter import ClassRecord, PrimitiveMethod
from .nodes import find_nodes
from .links import MetaLink
from .reify import NodeMirror
from .values import Array, Block, Instance, Symbol, identical

BUILTIN_CLASSES = (
    "Object", "Boolean", "Integer", "String", "Symbol", "UndefinedObject",
    "Block", "Array", "OrderedCollection", "Transcript", "Halt", "Random",
    "MetaLink", "Reflect", "NodeMirror", "MethodMirror", "ContextMirror",
    "VariableMirror", "Operation",
)

KERNEL_SOURCE = """
class Object [
    logCr [ Transcript logCr: self printString ]
    logCr: anObject [ Transcript logCr: anObject printString ]
    log: anObject [ Transcript show: anObject printString ]
    halt [ Halt now ]
]
class Integer [
    timesRepeat: aBlock [
        | i |
        i := 0.
        [ i < self ] whileTrue: [ aBlock value. i := i + 1 ]
    ]
    to: stop do: aBlock [
        | i |
        i := self.
        [ i <= stop ] whileTrue: [ aBlock value: i. i := i + 1 ]
    ]
]
"""


def _prim(cls, selector, fn):
    cls.methods[selector] = PrimitiveMethod(selector, fn)


def _cprim(cls, selector, fn):
    cls.class_methods[selector] = PrimitiveMethod(selector, fn)


def _need_int(v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise MkRuntimeError("an Integer argument is required")
    return v


def _need_block(v):
    if not isinstance(v, Block):
        raise MkRuntimeError("a Block argument is required")
    return v


def _need_string(v):
    if not isinstance(v, str):
        raise MkRuntimeError("a String argument is required")
    return v


def install_kernel(interp):
    classes = interp.classes
    obj = ClassRecord("Object")
    classes["Object"] = obj
    for name in BUILTIN_CLASSES[1:]:
        classes[name] = ClassRecord(name, superclass=obj)
    classes["Symbol"].superclass = classes["String"]
    classes["OrderedCollection"].superclass = classes["Array"]

    _object_protocol(interp, obj)
    _boolean_protocol(interp, classes["Boolean"])
    _integer_protocol(interp, classes["Integer"])
    _string_protocol(interp, classes["String"], classes["Symbol"])
    _block_protocol(interp, classes["Block"])
    _collection_protocol(interp, classes["Array"],
                         classes["OrderedCollection"])
    _io_protocol(interp, classes["Transcript"], classes["Halt"],
                 classes["Random"])
    _reflection_protocol(interp, classes)

    interp.load(KERNEL_SOURCE, file="<kernel>")

    from .tools import install_tool_classes
    install_tool_classes(interp)


# -- Object -----------------------------------------------------------------

def _object_protocol(interp, obj):
    def new(interp, recv, args, sender):
        if not isinstance(recv, ClassRecord):
            raise MkRuntimeError("only classes respond to #new")
        if recv.name == "MetaLink":
            return MetaLink()
        if recv.name in ("Array", "OrderedCollection"):
            return Array(recv, [])
        inst = Instance(recv, {name: None for name in recv.all_slot_names()})
        init = recv.lookup("initialize")
        if init is not None and not isinstance(init, PrimitiveMethod):
            interp.execute_method(init, inst, [], sender)
        return inst

    _cprim(obj, "new", new)

    def lookup_sel(interp, recv, args, sender):
        if not isinstance(recv, ClassRecord):
            raise MkRuntimeError("only classes respond to #lookupSelector:")
        record = recv.lookup(str(args[0]))
        if record is None or isinstance(record, PrimitiveMethod):
            return None
        from .reify import MethodMirror
        return MethodMirror(interp, record)

    _cprim(obj, "lookupSelector:", lookup_sel)
    _prim(obj, "printString", lambda i, r, a, s: i.print_string(r))
    _prim(obj, "class", lambda i, r, a, s: i.class_of(r))
    _prim(obj, "==", lambda i, r, a, s: identical(r, a[0]))
    _prim(obj, "~~", lambda i, r, a, s: not identical(r, a[0]))
    _prim(obj, "=", lambda i, r, a, s: identical(r, a[0]))
    _prim(obj, "~=", lambda i, r, a, s: not identical(r, a[0]))
    _prim(obj, "isNil", lambda i, r, a, s: r is None)
    _prim(obj, "notNil", lambda i, r, a, s: r is not None)
    _prim(obj, "yourself", lambda i, r, a, s: r)
    _prim(obj, "respondsTo:",
          lambda i, r, a, s: i.lookup_selector(r, str(a[0])) is not None)

    def error(interp, recv, args, sender):
        raise MkRuntimeError(interp.print_string(args[0]),
                             trace=interp.stack_snapshot(sender))
    _prim(obj, "error:", error)

    def if_nil(interp, recv, args, sender):
        if recv is None:
            return interp.call_block(_need_block(args[0]), [], sender)
        return recv
    _prim(obj, "ifNil:", if_nil)

    def if_not_nil(interp, recv, args, sender):
        if recv is None:
            return None
        blk = _need_block(args[0])
        return interp.call_block(blk, [recv] if blk.arity == 1 else [], sender)
    _prim(obj, "ifNotNil:", if_not_nil)


# -- Boolean ----------------------------------------------------------------

def _boolean_protocol(interp, cls):
    def run(interp, block_or_value, sender):
        if isinstance(block_or_value, Block):
            return interp.call_block(block_or_value, [], sender)
        return block_or_value

    _prim(cls, "ifTrue:",
          lambda i, r, a, s: run(i, a[0], s) if r else None)
    _prim(cls, "ifFalse:",
          lambda i, r, a, s: None if r else run(i, a[0], s))
    _prim(cls, "ifTrue:ifFalse:",
          lambda i, r, a, s: run(i, a[0] if r else a[1], s))
    _prim(cls, "ifFalse:ifTrue:",
          lambda i, r, a, s: run(i, a[1] if r else a[0], s))
    _prim(cls, "not", lambda i, r, a, s: not r)
    _prim(cls, "&", lambda i, r, a, s: bool(r and a[0] is True))
    _prim(cls, "|", lambda i, r, a, s: bool(r or a[0] is True))
    _prim(cls, "and:",
          lambda i, r, a, s: run(i, a[0], s) if r else False)
    _prim(cls, "or:",
          lambda i, r, a, s: True if r else run(i, a[0], s))


# -- Integer ----------------------------------------------------------------

def _integer_protocol(interp, cls):
    def arith(op):
        def fn(interp, r, a, s):
            return interp.check_int(op(r, _need_int(a[0])), s)
        return fn

    def divide(interp, r, a, s):
        d = _need_int(a[0])
        if d == 0:
            raise MkRuntimeError("division by zero",
                                 trace=interp.stack_snapshot(s))
        return interp.check_int(r // d, s)

    def modulo(interp, r, a, s):
        d = _need_int(a[0])
        if d == 0:
            raise MkRuntimeError("division by zero",
                                 trace=interp.stack_snapshot(s))
        return r % d

    _prim(cls, "+", arith(lambda x, y: x + y))
    _prim(cls, "-", arith(lambda x, y: x - y))
    _prim(cls, "*", arith(lambda x, y: x * y))
    _prim(cls, "/", divide)
    _prim(cls, "//", divide)
    _prim(cls, "\\\\", modulo)
    _prim(cls, "<", lambda i, r, a, s: r < _need_int(a[0]))
    _prim(cls, "<=", lambda i, r, a, s: r <= _need_int(a[0]))
    _prim(cls, ">", lambda i, r, a, s: r > _need_int(a[0]))
    _prim(cls, ">=", lambda i, r, a, s: r >= _need_int(a[0]))
    _prim(cls, "=", lambda i, r, a, s: not isinstance(a[0], bool)
          and isinstance(a[0], int) and r == a[0])
    _prim(cls, "~=", lambda i, r, a, s: isinstance(a[0], bool)
          or not isinstance(a[0], int) or r != a[0])
    _prim(cls, "max:", lambda i, r, a, s: max(r, _need_int(a[0])))
    _prim(cls, "min:", lambda i, r, a, s: min(r, _need_int(a[0])))
    _prim(cls, "abs", lambda i, r, a, s: i.check_int(abs(r), s))
    _prim(cls, "negated", lambda i, r, a, s: i.check_int(-r, s))
    _prim(cls, "even", lambda i, r, a, s: r % 2 == 0)
    _prim(cls, "odd", lambda i, r, a, s: r % 2 == 1)


# -- String / Symbol --------------------------------------------------------

def _string_protocol(interp, string_cls, symbol_cls):
    _prim(string_cls, ",",
          lambda i, r, a, s: r + _need_string(a[0]))
    _prim(string_cls, "size", lambda i, r, a, s: len(r))
    _prim(string_cls, "=",
          lambda i, r, a, s: isinstance(a[0], str) and str(r) == str(a[0]))
    _prim(string_cls, "~=",
          lambda i, r, a, s: not (isinstance(a[0], str)
                                  and str(r) == str(a[0])))
    _prim(string_cls, "asSymbol", lambda i, r, a, s: Symbol(str(r)))
    _prim(string_cls, "asString", lambda i, r, a, s: "" + r)
    _prim(string_cls, "isEmpty", lambda i, r, a, s: len(r) == 0)


# -- Block ------------------------------------------------------------------

def _block_protocol(interp, cls):
    for n in range(5):
        sel = "value" if n == 0 else "value:" * n
        _prim(cls, sel,
              lambda i, r, a, s: i.call_block(r, list(a), s))
    _prim(cls, "numArgs", lambda i, r, a, s: r.arity)

    def while_true(interp, r, a, s):
        body = _need_block(a[0]) if a else None
        while interp.call_block(r, [], s) is True:
            if body is not None:
                interp.call_block(body, [], s)
        return None

    def while_false(interp, r, a, s):
        body = _need_block(a[0]) if a else None
        while interp.call_block(r, [], s) is not True:
            if body is not None:
                interp.call_block(body, [], s)
        return None

    _prim(cls, "whileTrue:", while_true)
    _prim(cls, "whileTrue", while_true)
    _prim(cls, "whileFalse:", while_false)


# -- collections ------------------------------------------------------------

def _collection_protocol(interp, array_cls, oc_cls):
    def at(interp, r, a, s):
        idx = _need_int(a[0])
        if not 1 <= idx <= len(r.items):
            raise MkRuntimeError("index %d out of bounds (size %d)"
                                 % (idx, len(r.items)),
                                 trace=interp.stack_snapshot(s))
        return r.items[idx - 1]

    def at_put(interp, r, a, s):
        idx = _need_int(a[0])
        if not 1 <= idx <= len(r.items):
            raise MkRuntimeError("index %d out of bounds (size %d)"
                                 % (idx, len(r.items)),
                                 trace=interp.stack_snapshot(s))
        r.items[idx - 1] = a[1]
        return a[1]

    def do(interp, r, a, s):
        blk = _need_block(a[0])
        for item in list(r.items):
            interp.call_block(blk, [item], s)
        return r

    def collect(interp, r, a, s):
        blk = _need_block(a[0])
        return Array(r.class_ref,
                     [interp.call_block(blk, [item], s)
                      for item in list(r.items)])

    def select(interp, r, a, s):
        blk = _need_block(a[0])
        return Array(r.class_ref,
                     [item for item in list(r.items)
                      if interp.call_block(blk, [item], s) is True])

    def detect_if_none(interp, r, a, s):
        blk = _need_block(a[0])
        for item in list(r.items):
            if interp.call_block(blk, [item], s) is True:
                return item
        return interp.call_block(_need_block(a[1]), [], s)

    _prim(array_cls, "at:", at)
    _prim(array_cls, "at:put:", at_put)
    _prim(array_cls, "size", lambda i, r, a, s: len(r.items))
    _prim(array_cls, "isEmpty", lambda i, r, a, s: not r.items)
    _prim(array_cls, "notEmpty", lambda i, r, a, s: bool(r.items))
    _prim(array_cls, "do:", do)
    _prim(array_cls, "collect:", collect)
    _prim(array_cls, "select:", select)
    _prim(array_cls, "detect:ifNone:", detect_if_none)
    _prim(array_cls, "includes:",
          lambda i, r, a, s: any(identical(x, a[0]) for x in r.items))
    _prim(array_cls, "first",
          lambda i, r, a, s: at(i, r, [1], s))
    _prim(array_cls, "last",
          lambda i, r, a, s: at(i, r, [len(r.items)], s))

    def add(interp, r, a, s):
        r.items.append(a[0])
        return a[0]

    def remove_first(interp, r, a, s):
        if not r.items:
            raise MkRuntimeError("collection is empty",
                                 trace=interp.stack_snapshot(s))
        return r.items.pop(0)

    _prim(oc_cls, "add:", add)
    _prim(oc_cls, "addAll:",
          lambda i, r, a, s: (r.items.extend(a[0].items), a[0])[1])
    _prim(oc_cls, "removeFirst", remove_first)
    _prim(oc_cls, "removeAll", lambda i, r, a, s: (r.items.clear(), r)[1])


# -- Transcript / Halt / Random ---------------------------------------------

def _io_protocol(interp, transcript, halt, random_cls):
    _cprim(transcript, "show:",
           lambda i, r, a, s: (i.write(i.print_string(a[0])), a[0])[1])
    _cprim(transcript, "log:",
           lambda i, r, a, s: (i.write(i.print_string(a[0])), a[0])[1])
    _cprim(transcript, "logCr:",
           lambda i, r, a, s: (i.write(i.print_string(a[0]) + "\n"), a[0])[1])
    _cprim(transcript, "cr", lambda i, r, a, s: i.write("\n"))

    _cprim(halt, "now", lambda i, r, a, s: i.halt(s))

    # Values come from the interpreter-owned stream so a fixed seed gives
    # one reproducible sequence across the whole run.
    _prim(random_cls, "next",
          lambda i, r, a, s: i.random.randrange(1000))


# -- reflection -------------------------------------------------------------

def _reflection_protocol(interp, classes):
    link_cls = classes["MetaLink"]

    def setter(method):
        def fn(interp, r, a, s):
            method(r, a[0])
            return r
        return fn

    _prim(link_cls, "metaObject:", setter(MetaLink.set_meta_object))
    _prim(link_cls, "selector:",
          lambda i, r, a, s: (r.set_selector(str(a[0])), r)[1])
    _prim(link_cls, "control:",
          lambda i, r, a, s: (r.set_control(str(a[0])), r)[1])
    _prim(link_cls, "level:",
          lambda i, r, a, s: (r.set_level(_need_int(a[0])), r)[1])
    _prim(link_cls, "arguments:",
          lambda i, r, a, s: (r.set_arguments([str(x) for x in a[0].items]),
                              r)[1])
    _prim(link_cls, "condition:",
          lambda i, r, a, s: (r.set_condition(a[0]), r)[1])
    _prim(link_cls, "condition:arguments:",
          lambda i, r, a, s: (r.set_condition(
              a[0], [str(x) for x in a[1].items]), r)[1])
    _prim(link_cls, "invalidate", lambda i, r, a, s: (i.invalidate(r), r)[1])
    _prim(link_cls, "uninstall", lambda i, r, a, s: (i.uninstall(r), r)[1])
    _prim(link_cls, "enable", lambda i, r, a, s: (r.enable(), r)[1])
    _prim(link_cls, "disable", lambda i, r, a, s: (r.disable(), r)[1])

    def reflect_class_selector(interp, r, a, s):
        cls = a[0]
        name = cls.name if isinstance(cls, ClassRecord) else str(cls)
        return NodeMirror(interp, interp.method_ast(name, str(a[1])))

    _cprim(classes["Reflect"], "class:selector:", reflect_class_selector)

    node_cls = classes["NodeMirror"]

    def mirrors(interp, nodes):
        return interp.new_array([NodeMirror(interp, n) for n in nodes])

    def query(name, with_arg):
        if with_arg:
            return lambda i, r, a, s: mirrors(
                i, find_nodes(r.node, name, str(a[0])))
        return lambda i, r, a, s: mirrors(i, find_nodes(r.node, name))

    _prim(node_cls, "link:", lambda i, r, a, s: (i.install(a[0], r.node),
                                                 a[0])[1])
    _prim(node_cls, "link:forObject:",
          lambda i, r, a, s: (i.install_for_object(a[0], r.node, a[1]),
                              a[0])[1])
    _prim(node_cls, "removeLink:",
          lambda i, r, a, s: (i.remove_link(r.node, a[0]), a[0])[1])
    _prim(node_cls, "removeLink:forObject:",
          lambda i, r, a, s: (i.remove_link(r.node, a[0], a[1]), a[0])[1])
    _prim(node_cls, "allNodes", query("all-nodes", False))
    _prim(node_cls, "sends", query("all-sends", False))
    _prim(node_cls, "sendsOf:", query("sends-of", True))
    _prim(node_cls, "reads:", query("reads-of", True))
    _prim(node_cls, "writes:", query("writes-of", True))

    def statement_at(interp, r, a, s):
        found = find_nodes(r.node, "statement-at", _need_int(a[0]))
        return NodeMirror(interp, found[0]) if found else None

    _prim(node_cls, "statementAt:", statement_at)
    _prim(node_cls, "selector",
          lambda i, r, a, s: Symbol(r.node.selector)
          if r.node.selector else None)
    _prim(node_cls, "name",
          lambda i, r, a, s: r.node.var_name)

    method_cls = classes["MethodMirror"]
    _prim(method_cls, "selector",
          lambda i, r, a, s: Symbol(r.record.signature.selector))
    _prim(method_cls, "className",
          lambda i, r, a, s: r.record.signature.class_name)
    _prim(method_cls, "node",
          lambda i, r, a, s: NodeMirror(i, r.record.original_ast))
    _prim(method_cls, "ast",
          lambda i, r, a, s: NodeMirror(i, r.record.original_ast))

    context_cls = classes["ContextMirror"]
    _prim(context_cls, "receiver", lambda i, r, a, s: r.receiver)
    _prim(context_cls, "selector",
          lambda i, r, a, s: Symbol(r.selector) if r.selector else None)
    _prim(context_cls, "sender", lambda i, r, a, s: r.sender())
    _prim(context_cls, "tempAt:",
          lambda i, r, a, s: r.temps.get(str(a[0])))

    variable_cls = classes["VariableMirror"]
    _prim(variable_cls, "name", lambda i, r, a, s: r.name)
    _prim(variable_cls, "value", lambda i, r, a, s: r.read())

    op_cls = classes["Operation"]
    _prim(op_cls, "value", lambda i, r, a, s: r.invoke())
