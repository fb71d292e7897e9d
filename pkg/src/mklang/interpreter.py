"""Object model and tree-walking evaluator.

One Interpreter instance owns one strictly single-threaded execution:
classes, globals, the output sink, the link registry and the meta-level
counter. Distinct instances are fully independent.
"""

from __future__ import annotations

import itertools
import random as _random
from dataclasses import dataclass

from . import links as _links
from .errors import (
    HaltSignal, MethodReturn, MkRuntimeError, SelectorMismatch,
    UnknownClass, UnknownSelector,
)
from .nodes import (
    ASSIGNMENT, BLOCK, LITERAL, LITERAL_ARRAY, MESSAGE_SEND, META_HOOK,
    METHOD_DEF, RETURN, SELF_REF, SEQUENCE, TEMP_DECL, VAR_READ,
    MethodSignature, selector_arity,
)
from .parser import parse, parse_method
from .reify import (
    ContextMirror, MethodMirror, NodeMirror, OperationWrapper,
    TriggerContext, VariableMirror, resolve,
)
from .values import Array, Block, HostFunction, Instance, Symbol, identical

INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1


class PrimitiveMethod:
    """Host-implemented method; has no AST and therefore cannot be linked."""

    __slots__ = ("selector", "fn")

    def __init__(self, selector, fn):
        self.selector = selector
        self.fn = fn


class CompiledMethodRecord:
    __slots__ = ("signature", "original_ast", "original_source", "twin",
                 "node_ids", "node_index")

    def __init__(self, signature, original_ast, original_source):
        self.signature = signature
        self.original_ast = original_ast
        self.original_source = original_source
        self.twin = None
        self.node_index = {n.id: n for n in original_ast.walk()}
        self.node_ids = frozenset(self.node_index)


class ClassRecord:
    """A class; also the runtime value representing it."""

    def __init__(self, name, superclass=None, slot_names=()):
        self.name = name
        self.superclass = superclass
        self.slot_names = list(slot_names)
        self.methods = {}
        self.class_methods = {}

    def all_slot_names(self):
        names = []
        cls = self
        chain = []
        while cls is not None:
            chain.append(cls)
            cls = cls.superclass
        for cls in reversed(chain):
            names.extend(cls.slot_names)
        return names

    def lookup(self, selector):
        cls = self
        while cls is not None:
            m = cls.methods.get(selector)
            if m is not None:
                return m
            cls = cls.superclass
        return None

    def lookup_class_side(self, selector):
        cls = self
        while cls is not None:
            m = cls.class_methods.get(selector)
            if m is not None:
                return m
            cls = cls.superclass
        return None

    def __repr__(self):
        return "<class %s>" % self.name


class Activation:
    __slots__ = ("receiver", "method", "arguments", "temps", "sender",
                 "current_node", "lexical_parent", "home")

    def __init__(self, receiver, method, arguments, sender):
        self.receiver = receiver
        self.method = method
        self.arguments = arguments
        self.temps = {}
        self.sender = sender
        self.current_node = None
        self.lexical_parent = None
        self.home = self


@dataclass
class RunResult:
    output: str
    value: object
    signal: HaltSignal | None = None

    @property
    def trace(self):
        return self.signal.trace if self.signal is not None else []


class Interpreter:
    def __init__(self, seed=0):
        self.globals = {}
        self.classes = {}
        self.output = []
        self.meta_level = 0
        self.registry = _links.LinkRegistry()
        self.node_owner = {}          # node id -> CompiledMethodRecord
        self.recompile_hooks = []     # callables(interp, new_record)
        self.hook_visits = 0
        self.registry_consults = 0
        self.random = _random.Random(seed)
        self._node_counter = itertools.count(1)
        self._handlers = {
            LITERAL: self._eval_literal,
            LITERAL_ARRAY: self._eval_literal_array,
            SELF_REF: self._eval_self,
            VAR_READ: self._eval_var_read,
            ASSIGNMENT: self._eval_assignment,
            RETURN: self._eval_return,
            SEQUENCE: self._eval_sequence,
            BLOCK: self._eval_block,
            MESSAGE_SEND: self._eval_message,
            TEMP_DECL: self._eval_temp_decl,
            META_HOOK: self._eval_hook,
        }
        from .kernel import install_kernel
        install_kernel(self)

    # -- program loading --------------------------------------------------

    def load(self, source, file="<string>"):
        """Parse and install class definitions; returns the Program."""
        program = parse(source, file, self._node_counter)
        self._install_classes(program)
        return program

    def _install_classes(self, program):
        # Two passes so classes may reference each other.
        for cdef in program.classes:
            if cdef.name not in self.classes:
                self.classes[cdef.name] = ClassRecord(cdef.name)
        for cdef in program.classes:
            cls = self.classes[cdef.name]
            sup_name = cdef.superclass or "Object"
            if cdef.name != "Object":
                sup = self.classes.get(sup_name)
                if sup is None:
                    raise UnknownClass("unknown superclass %s" % sup_name)
                cls.superclass = sup
            inherited = set()
            sup = cls.superclass
            while sup is not None:
                inherited.update(sup.slot_names)
                sup = sup.superclass
            for slot in cdef.temps:
                if slot in inherited:
                    raise MkRuntimeError(
                        "slot %s already declared in a superclass of %s"
                        % (slot, cdef.name))
                if slot not in cls.slot_names:
                    cls.slot_names.append(slot)
            for mdef in cdef.children:
                if mdef.kind != METHOD_DEF:
                    continue
                self._compile_method(cls, mdef, program.source)

    def _compile_method(self, cls, mdef, source):
        sig = MethodSignature(cls.name, mdef.selector, len(mdef.params))
        record = CompiledMethodRecord(
            sig, mdef, source[mdef.span.start:mdef.span.end])
        old = cls.methods.get(mdef.selector)
        if old is not None and isinstance(old, CompiledMethodRecord):
            self._forget_method(old)
        cls.methods[mdef.selector] = record
        for nid in record.node_ids:
            self.node_owner[nid] = record
        return record

    def _forget_method(self, record):
        for nid in record.node_ids:
            self.registry.drop_node(nid)
            self.node_owner.pop(nid, None)
        record.twin = None

    # -- running ----------------------------------------------------------

    def run(self, source, file="<string>") -> RunResult:
        """Load class definitions and evaluate the top-level sequence."""
        mark = len(self.output)
        program = self.load(source, file)
        top = Activation(None, None, [], None)
        for t in program.main.temps:
            top.temps[t] = None
        try:
            try:
                value = self.eval_node(program.main, top)
            except MethodReturn as mr:
                if mr.target is top:
                    value = mr.value
                else:
                    raise MkRuntimeError(
                        "non-local return from an exited method",
                        trace=self.stack_snapshot(top)) from None
        except HaltSignal as halt:
            return RunResult("".join(self.output[mark:]), None, halt)
        return RunResult("".join(self.output[mark:]), value, None)

    def output_text(self):
        return "".join(self.output)

    def write(self, text):
        self.output.append(text)

    # -- reflection API ---------------------------------------------------

    def class_named(self, name):
        cls = self.classes.get(name)
        if cls is None:
            raise UnknownClass("unknown class %s" % name)
        return cls

    def lookup_method(self, cls, selector):
        """First match along the superclass chain, or None."""
        if isinstance(cls, str):
            cls = self.class_named(cls)
        return cls.lookup(selector)

    def method_ast(self, class_name, selector):
        """The ORIGINAL (unwoven) MethodDef root, links notwithstanding."""
        cls = self.class_named(class_name)
        record = cls.lookup(selector)
        if record is None or not isinstance(record, CompiledMethodRecord):
            raise UnknownSelector(
                "%s has no compiled method #%s" % (class_name, selector))
        return record.original_ast

    def recompile(self, class_name, selector, new_source):
        """Replace a method; every link installed on its old AST is lost.

        Activations already running the old method finish with the old
        definition; only the next calls see the new one."""
        cls = self.class_named(class_name)
        old = cls.methods.get(selector)
        if old is None or not isinstance(old, CompiledMethodRecord):
            raise UnknownSelector(
                "%s has no compiled method #%s" % (class_name, selector))
        mdef = parse_method(new_source, id_counter=self._node_counter)
        if mdef.selector != selector:
            raise SelectorMismatch(
                "recompile of #%s got a method named #%s"
                % (selector, mdef.selector))
        self._forget_method(old)
        sig = MethodSignature(cls.name, selector, len(mdef.params))
        record = CompiledMethodRecord(sig, mdef, new_source)
        cls.methods[selector] = record
        for nid in record.node_ids:
            self.node_owner[nid] = record
        for hook in list(self.recompile_hooks):
            hook(self, record)
        return record

    # link operations (thin wrappers; see links module)

    def install(self, link, node):
        _links.install(self, link, node)

    def install_for_object(self, link, node, target):
        _links.install(self, link, node, target)

    def remove_link(self, node, link, target=None):
        _links.remove(self, link, node, target)

    def uninstall(self, link):
        _links.uninstall(self, link)

    def invalidate(self, link):
        _links.invalidate(self, link)

    # -- dispatch ---------------------------------------------------------

    def class_of(self, v):
        if isinstance(v, bool):
            return self.classes["Boolean"]
        if isinstance(v, int):
            return self.classes["Integer"]
        if isinstance(v, Symbol):
            return self.classes["Symbol"]
        if isinstance(v, str):
            return self.classes["String"]
        if v is None:
            return self.classes["UndefinedObject"]
        if isinstance(v, Instance):
            return v.class_ref
        if isinstance(v, Array):
            return v.class_ref
        if isinstance(v, Block):
            return self.classes["Block"]
        if isinstance(v, ClassRecord):
            return self.classes["Object"]
        if isinstance(v, _links.MetaLink):
            return self.classes["MetaLink"]
        if isinstance(v, NodeMirror):
            return self.classes["NodeMirror"]
        if isinstance(v, MethodMirror):
            return self.classes["MethodMirror"]
        if isinstance(v, ContextMirror):
            return self.classes["ContextMirror"]
        if isinstance(v, VariableMirror):
            return self.classes["VariableMirror"]
        if isinstance(v, OperationWrapper):
            return self.classes["Operation"]
        if isinstance(v, HostFunction):
            return self.classes["Object"]
        name = getattr(type(v), "mk_class_name", None)
        if name is not None and name in self.classes:
            return self.classes[name]
        raise MkRuntimeError("value of unknown type: %r" % (v,))

    def lookup_selector(self, receiver, selector):
        """Method record the receiver would run for selector, or None."""
        if isinstance(receiver, HostFunction):
            return True
        if isinstance(receiver, ClassRecord):
            found = receiver.lookup_class_side(selector)
            if found is not None:
                return found
            return self.classes["Object"].lookup(selector)
        return self.class_of(receiver).lookup(selector)

    def send(self, receiver, selector, args, sender=None, node=None):
        if node is not None and sender is not None:
            sender.current_node = node
        if isinstance(receiver, HostFunction):
            return receiver.fn(*args)
        if isinstance(receiver, ClassRecord):
            rec = receiver.lookup_class_side(selector)
            if rec is None:
                rec = self.classes["Object"].lookup(selector)
        else:
            rec = self.class_of(receiver).lookup(selector)
        if rec is None:
            self.does_not_understand(receiver, selector, sender, node)
        if isinstance(rec, PrimitiveMethod):
            return rec.fn(self, receiver, args, sender)
        return self.execute_method(rec, receiver, args, sender)

    def does_not_understand(self, receiver, selector, sender, node=None):
        cls_name = (receiver.name if isinstance(receiver, ClassRecord)
                    else self.class_of(receiver).name)
        span = node.span if node is not None else None
        raise MkRuntimeError(
            "%s doesNotUnderstand: #%s" % (cls_name, selector),
            span=span, trace=self.stack_snapshot(sender))

    def execute_method(self, record, receiver, args, sender):
        twin = record.twin
        ast = twin.woven_ast if twin is not None else record.original_ast
        mdef = ast.children[0] if ast.kind == META_HOOK else ast
        if len(args) != len(mdef.params):
            raise MkRuntimeError(
                "wrong number of arguments for #%s: expected %d, got %d"
                % (record.signature.selector, len(mdef.params), len(args)),
                trace=self.stack_snapshot(sender))
        act = Activation(receiver, record, list(args), sender)
        act.current_node = mdef
        temps = act.temps
        for p, a in zip(mdef.params, args):
            temps[p] = a
        for t in mdef.temps:
            temps[t] = None
        if ast.kind == META_HOOK:
            return self._run_method_hook(ast, mdef, act, args)
        return self._run_method_body(mdef, act)

    def _run_method_body(self, mdef, act):
        try:
            self.eval_node(mdef.children[-1], act)
        except MethodReturn as mr:
            if mr.target is act:
                return mr.value
            raise
        return act.receiver

    # -- evaluation -------------------------------------------------------

    def eval_node(self, node, act):
        return self._handlers[node.kind](node, act)

    def _eval_literal(self, node, act):
        return node.value

    def _eval_literal_array(self, node, act):
        return Array(self.classes["Array"], list(node.value))

    def _eval_self(self, node, act):
        return act.home.receiver

    def _eval_temp_decl(self, node, act):
        return None

    def _eval_var_read(self, node, act):
        return self.read_var(node.var_name, act, node)

    def read_var(self, name, act, node=None):
        a = act
        while a is not None:
            temps = a.temps
            if name in temps:
                return temps[name]
            a = a.lexical_parent
        recv = act.home.receiver
        if isinstance(recv, Instance):
            slots = recv.slots
            if name in slots:
                return slots[name]
        if name in self.globals:
            return self.globals[name]
        if name in self.classes:
            return self.classes[name]
        raise MkRuntimeError(
            "undefined variable %s" % name,
            span=node.span if node is not None else None,
            trace=self.stack_snapshot(act))

    def _eval_assignment(self, node, act):
        value = self.eval_node(node.children[0], act)
        self.write_var(node.var_name, value, act, node)
        return value

    def write_var(self, name, value, act, node=None):
        a = act
        while a is not None:
            if name in a.temps:
                a.temps[name] = value
                return
            a = a.lexical_parent
        recv = act.home.receiver
        if isinstance(recv, Instance) and name in recv.slots:
            recv.slots[name] = value
            return
        if act.home.method is None:  # top level: assignments create globals
            self.globals[name] = value
            return
        raise MkRuntimeError(
            "undefined variable %s" % name,
            span=node.span if node is not None else None,
            trace=self.stack_snapshot(act))

    def _eval_return(self, node, act):
        value = self.eval_node(node.children[0], act)
        raise MethodReturn(act.home, value)

    def _eval_sequence(self, node, act):
        result = None
        for stmt in node.children:
            result = self.eval_node(stmt, act)
        return result

    def _eval_block(self, node, act):
        return Block(node, act)

    def _eval_message(self, node, act):
        children = node.children
        rnode = children[0]
        if rnode.kind == SELF_REF and rnode.var_name == "super":
            receiver = act.home.receiver
            args = [self.eval_node(c, act) for c in children[1:]]
            return self._send_super(receiver, node.selector, args, act, node)
        receiver = self.eval_node(rnode, act)
        args = [self.eval_node(c, act) for c in children[1:]]
        return self.send(receiver, node.selector, args, act, node)

    def _send_super(self, receiver, selector, args, act, node):
        home = act.home
        defining = self.classes.get(home.method.signature.class_name) \
            if home.method is not None else None
        start = defining.superclass if defining is not None else None
        rec = start.lookup(selector) if start is not None else None
        if rec is None:
            self.does_not_understand(receiver, selector, act, node)
        if isinstance(rec, PrimitiveMethod):
            return rec.fn(self, receiver, args, act)
        return self.execute_method(rec, receiver, args, act)

    # -- blocks -----------------------------------------------------------

    def call_block(self, block, args, sender):
        node = block.node
        if len(args) != len(node.params):
            raise MkRuntimeError(
                "block expects %d argument(s), got %d"
                % (len(node.params), len(args)),
                trace=self.stack_snapshot(sender))
        defining = block.defining_activation
        act = Activation(defining.home.receiver, defining.home.method,
                         list(args), sender)
        act.home = defining.home
        act.lexical_parent = defining
        for p, a in zip(node.params, args):
            act.temps[p] = a
        body = node.children[0] if node.children else None
        if block.hook_node is not None:
            hook_links = self.applicable_links(
                block.hook_node.id, act.receiver)
            if hook_links:
                return self._run_block_hook(block, body, act, args,
                                            hook_links)
        return self.eval_node(body, act) if body is not None else None

    def _run_block_hook(self, block, body, act, args, hook_links):
        ctx = TriggerContext(self, block.hook_node, act, pending_args=args)
        op = OperationWrapper(
            lambda: self.eval_node(body, act) if body is not None else None,
            block.hook_node)
        ctx.operation = op
        return self.run_trigger(hook_links, ctx, op)

    # -- hooks and triggering ---------------------------------------------

    def applicable_links(self, node_id, receiver):
        self.registry_consults += 1
        reg = self.registry
        result = reg.class_wide.get(node_id)
        per_obj = reg.object_centric.get(node_id)
        if per_obj is not None:
            try:
                oc = per_obj.get(receiver)
            except TypeError:  # unhashable receiver cannot be a target
                oc = None
            if oc:
                return (list(result) if result else []) + list(oc)
        return list(result) if result else []

    def _eval_hook(self, hook, act):
        self.hook_visits += 1
        inner = hook.children[0]
        orig = hook.original
        kind = inner.kind
        if kind == MESSAGE_SEND:
            return self._hook_message(hook, inner, orig, act)
        if kind == ASSIGNMENT:
            return self._hook_assignment(hook, inner, orig, act)
        if kind == VAR_READ:
            return self._hook_var_read(hook, inner, orig, act)
        if kind == RETURN:
            return self._hook_return(hook, inner, orig, act)
        if kind == BLOCK:
            # Fires at each invocation of the closure, not at its creation.
            return Block(inner, act, hook_node=orig)
        return self._hook_generic(hook, inner, orig, act)

    def _run_method_hook(self, hook, mdef, act, args):
        self.hook_visits += 1
        orig = hook.original
        hook_links = self.applicable_links(orig.id, act.receiver)
        if not hook_links:
            return self._run_method_body(mdef, act)
        ctx = TriggerContext(self, orig, act, pending_args=args)
        op = OperationWrapper(lambda: self._run_method_body(mdef, act), orig)
        ctx.operation = op
        return self.run_trigger(hook_links, ctx, op)

    def _hook_message(self, hook, inner, orig, act):
        children = inner.children
        rnode = children[0]
        is_super = rnode.kind == SELF_REF and rnode.var_name == "super"
        receiver = act.home.receiver if is_super else self.eval_node(rnode, act)
        args = [self.eval_node(c, act) for c in children[1:]]
        hook_links = self.applicable_links(orig.id, act.receiver)
        if is_super:
            perform = lambda: self._send_super(receiver, inner.selector,
                                               args, act, orig)
        else:
            perform = lambda: self.send(receiver, inner.selector, args,
                                        act, orig)
        if not hook_links:
            return perform()
        ctx = TriggerContext(self, orig, act, pending_receiver=receiver,
                             pending_args=args)
        op = OperationWrapper(perform, orig)
        ctx.operation = op
        return self.run_trigger(hook_links, ctx, op)

    def _hook_assignment(self, hook, inner, orig, act):
        value = self.eval_node(inner.children[0], act)
        hook_links = self.applicable_links(orig.id, act.receiver)
        if not hook_links:
            self.write_var(inner.var_name, value, act, orig)
            return value

        def perform():
            self.write_var(inner.var_name, value, act, orig)
            return value

        ctx = TriggerContext(self, orig, act, pending_value=value)
        op = OperationWrapper(perform, orig)
        ctx.operation = op
        return self.run_trigger(hook_links, ctx, op)

    def _hook_var_read(self, hook, inner, orig, act):
        hook_links = self.applicable_links(orig.id, act.receiver)
        if not hook_links:
            return self.read_var(inner.var_name, act, orig)
        ctx = TriggerContext(self, orig, act)
        op = OperationWrapper(
            lambda: self.read_var(inner.var_name, act, orig), orig)
        ctx.operation = op
        return self.run_trigger(hook_links, ctx, op)

    def _hook_return(self, hook, inner, orig, act):
        value = self.eval_node(inner.children[0], act)
        hook_links = self.applicable_links(orig.id, act.receiver)
        if not hook_links:
            raise MethodReturn(act.home, value)
        ctx = TriggerContext(self, orig, act, pending_value=value)
        op = OperationWrapper(lambda: value, orig)
        ctx.operation = op
        pairs = self._link_configs(hook_links)
        ctx.phase = "before"
        for link, cfg in pairs:
            if cfg.control == "before":
                self.fire_link(link, cfg, ctx)
        result = value
        ctx.phase = "instead"
        for link, cfg in reversed(pairs):
            if cfg.control == "instead":
                fired, replacement = self.fire_link(link, cfg, ctx)
                if fired:
                    result = replacement
                    break
        # After-links on a return never fire: control leaves the method.
        raise MethodReturn(act.home, result)

    def _hook_generic(self, hook, inner, orig, act):
        hook_links = self.applicable_links(orig.id, act.receiver)
        if not hook_links:
            return self.eval_node(inner, act)
        ctx = TriggerContext(self, orig, act)
        op = OperationWrapper(lambda: self.eval_node(inner, act), orig)
        ctx.operation = op
        return self.run_trigger(hook_links, ctx, op)

    def _link_configs(self, hook_links):
        return [(link, link.effective(self)) for link in hook_links]

    def run_trigger(self, hook_links, ctx, op):
        """Before/instead/after protocol over all applicable links.

        Class-wide links come first (installation order), then
        object-centric ones. Before-links fire in that order, after-links
        in reverse. An instead-link's result replaces the node's value;
        the most specific (object-centric, latest installed) wins."""
        pairs = self._link_configs(hook_links)
        ctx.phase = "before"
        has_instead = False
        has_after = False
        for link, cfg in pairs:
            ctl = cfg.control
            if ctl == "before":
                self.fire_link(link, cfg, ctx)
            elif ctl == "instead":
                has_instead = True
            else:
                has_after = True
        if has_instead:
            ctx.phase = "instead"
            result = None
            fired_instead = False
            for link, cfg in reversed(pairs):
                if cfg.control == "instead":
                    fired, replacement = self.fire_link(link, cfg, ctx)
                    if fired:
                        result = replacement
                        fired_instead = True
                        break
            if not fired_instead:
                result = op.invoke_base()
        else:
            result = op.invoke_base()
        if has_after:
            ctx.phase = "after"
            ctx.pending_value = result
            for link, cfg in reversed(pairs):
                if cfg.control == "after":
                    self.fire_link(link, cfg, ctx)
        return result

    def fire_link(self, link, cfg, ctx):
        """Level-gated, condition-gated dispatch to the meta-object.

        Returns (fired, value); the meta level is incremented for the
        whole activation (condition included) and restored on every exit
        path, signals included."""
        if not link.enabled:
            return (False, None)
        if self.meta_level != cfg.level:
            return (False, None)
        ctx.current_link = link
        self.meta_level += 1
        try:
            if cfg.condition is not None:
                cond_vals = [resolve(k, ctx) for k in cfg.condition_args]
                if self._check_condition(cfg.condition, cond_vals,
                                         ctx.activation) is not True:
                    return (False, None)
            args = [resolve(k, ctx) for k in cfg.arguments]
            return (True, self.send(cfg.meta_object, cfg.selector, args,
                                    ctx.activation))
        finally:
            self.meta_level -= 1

    def _check_condition(self, condition, cond_vals, act):
        if isinstance(condition, bool):
            return condition
        if isinstance(condition, Block):
            return self.call_block(condition, cond_vals, act)
        if isinstance(condition, HostFunction):
            return condition.fn(*cond_vals)
        selector = "value" if not cond_vals else "value:" * len(cond_vals)
        return self.send(condition, selector, cond_vals, act)

    # -- helpers ----------------------------------------------------------

    def new_array(self, items=None, ordered=False):
        cls = self.classes["OrderedCollection" if ordered else "Array"]
        return Array(cls, items if items is not None else [])

    def check_int(self, value, act=None):
        if not (INT_MIN <= value <= INT_MAX):
            raise MkRuntimeError("integer overflow",
                                 trace=self.stack_snapshot(act))
        return value

    def stack_snapshot(self, act):
        lines = []
        a = act
        while a is not None:
            if a.method is not None:
                sig = a.method.signature
                where = "%s>>%s" % (sig.class_name, sig.selector)
            else:
                where = "top-level"
            node = a.current_node
            where += " (%s)" % (node.span if node is not None else "?")
            lines.append(where)
            a = a.sender
        return lines

    def halt(self, act):
        raise HaltSignal(self.stack_snapshot(act))

    def print_string(self, v):
        if v is True:
            return "true"
        if v is False:
            return "false"
        if v is None:
            return "nil"
        if isinstance(v, Symbol):
            return "#" + str(v)
        if isinstance(v, int):
            return str(v)
        if isinstance(v, str):
            return v
        if isinstance(v, Array):
            inner = " ".join(self.print_string(i) for i in v.items)
            if v.class_ref.name == "Array":
                return "#(%s)" % inner
            return "%s (%s)" % (self._article(v.class_ref.name), inner)
        if isinstance(v, Instance):
            return self._article(v.class_ref.name)
        if isinstance(v, ClassRecord):
            return v.name
        if isinstance(v, Block):
            return "a Block"
        if isinstance(v, _links.MetaLink):
            return "a MetaLink"
        if isinstance(v, NodeMirror):
            return v.describe()
        if isinstance(v, MethodMirror):
            return v.describe()
        if isinstance(v, ContextMirror):
            return v.describe()
        if isinstance(v, VariableMirror):
            return v.describe()
        if isinstance(v, OperationWrapper):
            return "an Operation(%s)" % v.node.kind
        if isinstance(v, HostFunction):
            return v.label
        describe = getattr(v, "describe", None)
        if callable(describe):
            return describe()
        return repr(v)

    @staticmethod
    def _article(name):
        return ("an " if name[:1] in "AEIOU" else "a ") + name

    @staticmethod
    def is_identical(a, b):
        return identical(a, b)


def run_program(source, seed=0) -> RunResult:
    """Convenience one-shot: fresh interpreter, parse, run."""
    return Interpreter(seed=seed).run(source)
