"""Ready-made meta-programs built on metalinks.

Breakpoints (class-wide and per-object), variable watchpoints that can
survive recompilation, and a cross-cutting trace counter. Each tool is a
thin owner of one link plus the bookkeeping the link itself doesn't do.
"""

from __future__ import annotations

from .errors import MkRuntimeError, UnknownVariable
from .links import MetaLink, install, uninstall
from .nodes import find_nodes
from .values import HostFunction

SITES = ("method-entry", "statement-at", "send-of")


class Breakpoint:
    """A before-link to Halt>>now on one or more nodes of a method."""

    mk_class_name = "Breakpoint"

    def __init__(self, interp, link, sites, target=None):
        self.interp = interp
        self.link = link
        self.sites = sites
        self.target = target

    def remove(self):
        uninstall(self.interp, self.link)

    def describe(self):
        scope = "object-centric" if self.target is not None else "class-wide"
        return "a Breakpoint (%s, %d site%s)" % (
            scope, len(self.sites), "" if len(self.sites) == 1 else "s")


class VariableWatch:
    """Records every write (optionally read) of one slot of a class.

    History entries are (owner object, value, method signature string),
    appended in execution order. A persistent watch re-installs itself on
    the fresh AST whenever a method of the watched class is recompiled."""

    mk_class_name = "Watch"

    def __init__(self, interp, class_name, var_name, persistent,
                 include_reads):
        self.interp = interp
        self.class_name = class_name
        self.var_name = var_name
        self.persistent = persistent
        self.include_reads = include_reads
        self.history = []
        self.write_link = self._make_link(("object", "newValue", "method"))
        self.read_link = (self._make_link(("object", "value", "method"))
                          if include_reads else None)
        self._hook = None

    def _make_link(self, reifications):
        link = MetaLink()
        link.set_meta_object(HostFunction(self._record, "a watch recorder"))
        link.set_selector("value:value:value:")
        link.set_arguments(reifications)
        link.set_control("after")
        return link

    def _record(self, owner, value, method_mirror):
        if method_mirror is None:
            sig = "?"
        else:
            s = method_mirror.record.signature
            sig = "%s>>%s" % (s.class_name, s.selector)
        self.history.append((owner, value, sig))

    def attach(self, record):
        """Install on every access to the slot inside one method."""
        for node in find_nodes(record.original_ast, "writes-of",
                               self.var_name):
            install(self.interp, self.write_link, node)
        if self.read_link is not None:
            for node in find_nodes(record.original_ast, "reads-of",
                                   self.var_name):
                install(self.interp, self.read_link, node)

    def remove(self):
        uninstall(self.interp, self.write_link)
        if self.read_link is not None:
            uninstall(self.interp, self.read_link)
        if self._hook is not None:
            self.interp.recompile_hooks.remove(self._hook)
            self._hook = None

    def describe(self):
        return "a Watch (%s.%s, %d event%s)" % (
            self.class_name, self.var_name, len(self.history),
            "" if len(self.history) == 1 else "s")


class TraceCounter:
    """One shared counting link across any set of nodes."""

    mk_class_name = "TraceCounter"

    def __init__(self, interp):
        self.interp = interp
        self.counts = {}
        self.link = MetaLink()
        self.link.set_meta_object(HostFunction(self._bump, "a trace counter"))
        self.link.set_selector("value:")
        self.link.set_arguments(("node",))
        self.link.set_control("before")

    def _bump(self, node_mirror):
        nid = node_mirror.node.id
        self.counts[nid] = self.counts.get(nid, 0) + 1

    @property
    def total(self):
        return sum(self.counts.values())

    def remove(self):
        uninstall(self.interp, self.link)

    def describe(self):
        return "a TraceCounter (%d fire%s)" % (
            self.total, "" if self.total == 1 else "s")


def set_breakpoint(interp, class_name, selector, site="method-entry",
                   site_arg=None, target=None) -> Breakpoint:
    """Halt when control reaches the site, before the operation runs."""
    ast = interp.method_ast(class_name, selector)
    if site == "method-entry":
        nodes = [ast]
    elif site == "statement-at":
        nodes = find_nodes(ast, "statement-at", site_arg)
    elif site == "send-of":
        nodes = find_nodes(ast, "sends-of", site_arg)
    else:
        raise MkRuntimeError("unknown breakpoint site %r" % (site,))
    if not nodes:
        raise MkRuntimeError(
            "no %s site in %s>>%s" % (site, class_name, selector))
    link = MetaLink()
    link.set_meta_object(interp.classes["Halt"])
    link.set_selector("now")
    link.set_control("before")
    for node in nodes:
        install(interp, link, node, target)
    return Breakpoint(interp, link, nodes, target)


def set_breakpoint_for_object(interp, class_name, selector, target,
                              site="method-entry", site_arg=None):
    return set_breakpoint(interp, class_name, selector, site, site_arg,
                          target)


def watch_variable(interp, class_name, var_name, persistent=False,
                   include_reads=False) -> VariableWatch:
    cls = interp.class_named(class_name)
    if var_name not in cls.all_slot_names():
        raise UnknownVariable(
            "%s declares no slot named %s" % (class_name, var_name))
    watch = VariableWatch(interp, class_name, var_name, persistent,
                          include_reads)
    from .interpreter import PrimitiveMethod
    for record in cls.methods.values():
        if not isinstance(record, PrimitiveMethod):
            watch.attach(record)
    if persistent:
        def hook(hook_interp, new_record):
            if new_record.signature.class_name == class_name:
                watch.attach(new_record)
        watch._hook = hook
        interp.recompile_hooks.append(hook)
    return watch


def trace_count(interp, nodes, condition=None) -> TraceCounter:
    counter = TraceCounter(interp)
    if condition is not None:
        counter.link.set_condition(condition)
    for node in nodes:
        install(interp, counter.link, node)
    return counter


# -- language surface -------------------------------------------------------

def install_tool_classes(interp):
    from .interpreter import ClassRecord, PrimitiveMethod

    def _prim(cls, selector, fn):
        cls.methods[selector] = PrimitiveMethod(selector, fn)

    def _cprim(cls, selector, fn):
        cls.class_methods[selector] = PrimitiveMethod(selector, fn)

    obj = interp.classes["Object"]
    bp_cls = ClassRecord("Breakpoint", superclass=obj)
    watch_cls = ClassRecord("Watch", superclass=obj)
    counter_cls = ClassRecord("TraceCounter", superclass=obj)
    interp.classes["Breakpoint"] = bp_cls
    interp.classes["Watch"] = watch_cls
    interp.classes["TraceCounter"] = counter_cls

    def class_name_of(v):
        return v.name if isinstance(v, ClassRecord) else str(v)

    _cprim(bp_cls, "onClass:selector:",
           lambda i, r, a, s: set_breakpoint(i, class_name_of(a[0]),
                                             str(a[1])))
    _cprim(bp_cls, "onClass:selector:forObject:",
           lambda i, r, a, s: set_breakpoint(i, class_name_of(a[0]),
                                             str(a[1]), target=a[2]))
    _prim(bp_cls, "remove", lambda i, r, a, s: (r.remove(), r)[1])

    _cprim(watch_cls, "class:variable:persistent:",
           lambda i, r, a, s: watch_variable(i, class_name_of(a[0]),
                                             str(a[1]), a[2] is True))
    _prim(watch_cls, "remove", lambda i, r, a, s: (r.remove(), r)[1])
    _prim(watch_cls, "history",
          lambda i, r, a, s: i.new_array(
              [i.new_array([owner, value, sig]) for owner, value, sig
               in r.history], ordered=True))
    _prim(watch_cls, "size", lambda i, r, a, s: len(r.history))
