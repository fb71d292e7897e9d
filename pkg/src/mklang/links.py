"""Metalinks, the link registry, and dual-method weaving.

A MetaLink is a first-class, mutable annotation. Installing one on an AST
node creates (or extends) the owning method's woven twin: a deep copy of
the original AST in which every linked node is wrapped in a MetaHook.
The evaluator executes the twin when present; the original AST and source
are never touched, and the twin disappears when the last link is removed.
"""

from __future__ import annotations

from .errors import (
    ArityMismatch, InsteadConflict, MkRuntimeError, NodeNotInstallable,
)
from .nodes import META_HOOK, NOT_INSTALLABLE, AstNode, selector_arity
from .reify import APPLICABILITY, table_kind
from .values import Array, Block, HostFunction, Instance

CONTROLS = ("before", "after", "instead")


class LinkConfig:
    """Immutable snapshot of a link's definition, captured at install or
    (re)validation time. The evaluator fires from the snapshot so that a
    failed invalidate leaves the previously woven definition active."""

    __slots__ = ("meta_object", "selector", "control", "arguments",
                 "condition", "condition_args", "level")

    def __init__(self, link):
        self.meta_object = link.meta_object
        self.selector = link.selector
        self.control = link.control
        self.arguments = tuple(link.reification_requests)
        self.condition = link.condition
        self.condition_args = tuple(link.condition_args)
        self.level = link.level


class MetaLink:
    """First-class behavioral annotation (meta-object, selector, control,
    reification requests, condition, execution level)."""

    def __init__(self):
        self.meta_object = None
        self.selector = None
        self.control = "before"
        self.reification_requests = ()
        self.condition = None
        self.condition_args = ()
        self.level = 0
        self.enabled = True
        self.dirty = False
        self.installed_on = set()   # {(node_id, target-or-None)}
        self.interp = None
        self._config = None

    # Setters are unchecked; validity is established at install/invalidate
    # (or lazily at the next trigger for an already-installed link).

    def set_meta_object(self, value):
        self.meta_object = value
        self._touch()

    def set_selector(self, selector):
        self.selector = str(selector) if selector is not None else None
        self._touch()

    def set_control(self, control):
        control = str(control)
        if control not in CONTROLS:
            raise MkRuntimeError("unknown link control #%s" % control)
        self.control = control
        self._touch()

    def set_arguments(self, kinds):
        self.reification_requests = tuple(str(k) for k in kinds)
        self._touch()

    def set_condition(self, condition, kinds=()):
        self.condition = condition
        self.condition_args = tuple(str(k) for k in kinds)
        self._touch()

    def set_level(self, level):
        if not isinstance(level, int) or isinstance(level, bool) or level < 0:
            raise MkRuntimeError("link level must be a non-negative integer")
        self.level = level
        self._touch()

    def enable(self):
        self.enabled = True

    def disable(self):
        self.enabled = False

    def _touch(self):
        if self.installed_on:
            self.dirty = True

    def effective(self, interp):
        """Current firing configuration; lazily revalidates a dirty link.

        If the mutated definition is invalid, the previous snapshot stays
        active (same contract as a failed explicit invalidate)."""
        if self._config is None or self.dirty:
            try:
                validate_link(interp, self, self._installed_nodes(interp))
            except ArityMismatch:
                if self._config is None:
                    raise
                return self._config
            self._config = LinkConfig(self)
            self.dirty = False
        return self._config

    def _installed_nodes(self, interp):
        nodes = []
        for node_id, _target in self.installed_on:
            record = interp.node_owner.get(node_id)
            if record is not None:
                nodes.append(record.node_index[node_id])
        return nodes

    def __repr__(self):
        return "<MetaLink %s->%s %s level=%d sites=%d>" % (
            self.control, self.selector, list(self.reification_requests),
            self.level, len(self.installed_on))


class LinkRegistry:
    """Installed links per node id, split by scope.

    Entries exist only for nodes of methods that currently have a twin;
    lists preserve installation order."""

    def __init__(self):
        self.class_wide = {}      # node_id -> [MetaLink]
        self.object_centric = {}  # node_id -> {target: [MetaLink]}

    def add(self, node_id, link, target=None):
        if target is None:
            bucket = self.class_wide.setdefault(node_id, [])
        else:
            bucket = self.object_centric.setdefault(node_id, {}) \
                                        .setdefault(target, [])
        if link not in bucket:
            bucket.append(link)

    def remove(self, node_id, link, target=None):
        if target is None:
            bucket = self.class_wide.get(node_id)
            if bucket and link in bucket:
                bucket.remove(link)
                if not bucket:
                    del self.class_wide[node_id]
        else:
            per_obj = self.object_centric.get(node_id)
            if per_obj and target in per_obj:
                bucket = per_obj[target]
                if link in bucket:
                    bucket.remove(link)
                    if not bucket:
                        del per_obj[target]
                    if not per_obj:
                        del self.object_centric[node_id]

    def drop_node(self, node_id):
        """Forget every entry for a node (recompilation path); shrinks the
        installation sets of the affected links."""
        for link in self.class_wide.pop(node_id, []):
            link.installed_on.discard((node_id, None))
        for target, links in self.object_centric.pop(node_id, {}).items():
            for link in links:
                link.installed_on.discard((node_id, target))

    def has_links(self, node_id):
        return node_id in self.class_wide or node_id in self.object_centric

    def linked_ids(self, node_ids):
        return {nid for nid in node_ids if self.has_links(nid)}

    def instead_installed(self, node_id, target=None):
        if target is None:
            bucket = self.class_wide.get(node_id, [])
        else:
            bucket = self.object_centric.get(node_id, {}).get(target, [])
        return [l for l in bucket if l.control == "instead"]


class ReflectiveMethod:
    """Woven twin of a compiled method; replaces it at execution time."""

    def __init__(self, record):
        self.record = record
        self.woven_ast = None
        self.copies = {}      # original node id -> woven copy node
        self.hook_table = {}  # original node id -> MetaHook node


def copy_tree(node: AstNode, copies: dict, parent=None) -> AstNode:
    dup = AstNode(
        kind=node.kind, span=node.span, id=node.id,
        selector=node.selector, var_name=node.var_name, value=node.value,
        name=node.name, superclass=node.superclass,
        params=list(node.params), temps=list(node.temps), parent=parent)
    dup.children = [copy_tree(c, copies, dup) for c in node.children]
    copies[node.id] = dup
    return dup


def weave(interp, record) -> "ReflectiveMethod | None":
    """(Re)build the twin from scratch from the current registry state."""
    linked = interp.registry.linked_ids(record.node_ids)
    if not linked:
        record.twin = None
        return None
    twin = ReflectiveMethod(record)
    twin.woven_ast = copy_tree(record.original_ast, twin.copies)
    for node_id in linked:
        _wrap(twin, node_id, record.node_index[node_id])
    record.twin = twin
    return twin


def _wrap(twin, node_id, original):
    target = twin.copies[node_id]
    hook = AstNode(kind=META_HOOK, span=target.span, id=-node_id,
                   children=[target], original=original)
    parent = target.parent
    if parent is None:
        twin.woven_ast = hook
    else:
        parent.children[parent.children.index(target)] = hook
    hook.parent = parent
    target.parent = hook
    twin.hook_table[node_id] = hook


def add_hook(interp, record, node_id):
    """Incremental weave: hook one more node into an existing twin.

    Avoids re-copying the whole method, which is what makes a second
    install on an already-instrumented method (hot path) cheap."""
    if record.twin is None:
        weave(interp, record)
        return
    twin = record.twin
    if node_id in twin.hook_table:
        return
    _wrap(twin, node_id, record.node_index[node_id])


def validate_link(interp, link, nodes):
    """Full validity check: configuration completeness, selector arity vs.
    reification count, meta-object lookup, and per-node applicability."""
    if link.meta_object is None or link.selector is None:
        raise ArityMismatch("link is not fully configured "
                            "(missing meta-object or selector)")
    want = selector_arity(link.selector)
    have = len(link.reification_requests)
    if want != have:
        raise ArityMismatch(
            "selector #%s takes %d argument(s) but %d reification(s) "
            "requested" % (link.selector, want, have))
    if not _understands(interp, link.meta_object, link.selector, want):
        raise ArityMismatch("meta-object does not understand #%s"
                            % link.selector)
    if isinstance(link.condition, Block) \
            and link.condition.arity != len(link.condition_args):
        raise ArityMismatch(
            "condition block takes %d argument(s) but %d reification(s) "
            "requested" % (link.condition.arity, len(link.condition_args)))
    for node in nodes:
        kind = table_kind(node)
        for req in link.reification_requests + link.condition_args:
            check_applicable(req, kind)


def check_applicable(reification, node_table_kind):
    from .errors import InapplicableReification
    allowed = APPLICABILITY.get(reification)
    if allowed is None:
        raise InapplicableReification(
            "unsupported reification #%s" % reification)
    if node_table_kind not in allowed:
        raise InapplicableReification(
            "#%s is not applicable to %s nodes"
            % (reification, node_table_kind))


def _understands(interp, meta_object, selector, arity):
    if isinstance(meta_object, HostFunction):
        return True
    if isinstance(meta_object, Block):
        expected = "value" if arity == 0 else "value:" * arity
        return selector == expected and meta_object.arity == arity
    return interp.lookup_selector(meta_object, selector) is not None


def install(interp, link, node, target=None):
    if node.kind in NOT_INSTALLABLE:
        raise NodeNotInstallable("links cannot be installed on %s nodes"
                                 % node.kind)
    record = interp.node_owner.get(node.id)
    if record is None or record.node_index.get(node.id) is not node:
        raise NodeNotInstallable(
            "node #%d does not belong to a method of a loaded class"
            % node.id)
    if target is not None and not isinstance(
            target, (Instance, Array, Block)) \
            and type(target).__name__ != "ClassRecord":
        raise MkRuntimeError("object-centric targets must be reference "
                             "objects with stable identity")
    validate_link(interp, link, [node])
    if link.control == "instead":
        conflict = [l for l in interp.registry.instead_installed(
            node.id, target) if l is not link]
        if conflict:
            raise InsteadConflict(
                "an instead-link is already installed on node #%d for this "
                "scope" % node.id)
    interp.registry.add(node.id, link, target)
    link.installed_on.add((node.id, target))
    link.interp = interp
    link._config = LinkConfig(link)
    link.dirty = False
    add_hook(interp, record, node.id)


def remove(interp, link, node, target=None):
    interp.registry.remove(node.id, link, target)
    link.installed_on.discard((node.id, target))
    record = interp.node_owner.get(node.id)
    if record is not None:
        weave(interp, record)


def uninstall(interp, link):
    records = set()
    for node_id, target in list(link.installed_on):
        interp.registry.remove(node_id, link, target)
        record = interp.node_owner.get(node_id)
        if record is not None:
            records.add(record)
    link.installed_on.clear()
    for record in records:
        weave(interp, record)


def invalidate(interp, link):
    if not link.installed_on:
        link.dirty = False
        return
    validate_link(interp, link, link._installed_nodes(interp))
    link._config = LinkConfig(link)
    link.dirty = False
    for record in {interp.node_owner[nid]
                   for nid, _ in link.installed_on
                   if nid in interp.node_owner}:
        weave(interp, record)
