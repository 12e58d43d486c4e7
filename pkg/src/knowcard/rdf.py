"""Triple store with Bag containers and subPropertyOf saturation.

Everything here is deliberately small: IRIs compare by resolved text,
stores have set semantics, and inference is forward-chaining closure over
an acyclic subPropertyOf hierarchy, with inferred triples flagged so
provenance stays visible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
DC_NS = "http://purl.org/DC/"
LB_NS = "http://localhost/rdfs/lbn-v1.2#"

DEFAULT_NAMESPACES = {
    "rdf": RDF_NS,
    "rdfs": RDFS_NS,
    "dc": DC_NS,
    "lb": LB_NS,
}

DEFAULT_BASE_IRI = "http://localhost/"

_SCHEME_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.-]*:")
_MEMBER_RE = re.compile(re.escape(RDF_NS) + r"_([1-9][0-9]*)\Z")


class RdfError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class ContainerError(RdfError):
    """NOT_A_CONTAINER or GAP_IN_MEMBERSHIP."""


class SchemaError(RdfError):
    """Bad ontology schema, e.g. a subPropertyOf cycle."""


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self):
        if not _SCHEME_RE.match(self.value):
            raise ValueError(f"IRI must be absolute (have a scheme): {self.value!r}")

    @classmethod
    def resolve(cls, name: str, namespaces: Optional[dict[str, str]] = None) -> "Iri":
        """Resolve ``prefix:local`` through a namespace map, or accept an
        absolute IRI as-is."""

        namespaces = namespaces if namespaces is not None else DEFAULT_NAMESPACES
        prefix, sep, local = name.partition(":")
        if sep and prefix in namespaces:
            return cls(namespaces[prefix] + local)
        return cls(name)

    def local_name(self) -> str:
        for cut in ("#", "/"):
            if cut in self.value:
                candidate = self.value.rsplit(cut, 1)[1]
                if candidate:
                    return candidate
        return self.value

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Literal:
    lexical: str
    lang: Optional[str] = None

    def __str__(self) -> str:
        return f'"{self.lexical}"@{self.lang}' if self.lang else f'"{self.lexical}"'


@dataclass(frozen=True, order=True)
class BlankNode:
    id: str

    def __str__(self) -> str:
        return f"_:{self.id}"


Term = Union[Iri, Literal, BlankNode]
Subject = Union[Iri, BlankNode]


def _term_key(term: Term) -> tuple[int, str, str]:
    if isinstance(term, Iri):
        return (0, term.value, "")
    if isinstance(term, BlankNode):
        return (1, term.id, "")
    return (2, term.lexical, term.lang or "")


@dataclass(frozen=True)
class Triple:
    subject: Subject
    predicate: Iri
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise ValueError("triple subject cannot be a literal")
        if not isinstance(self.predicate, Iri):
            raise ValueError("triple predicate must be an IRI")

    def sort_key(self):
        return (_term_key(self.subject), _term_key(self.predicate), _term_key(self.object))


class TripleStore:
    """A set of triples plus a namespace map; duplicates are no-ops."""

    def __init__(self, namespaces: Optional[dict[str, str]] = None):
        self.namespaces = dict(DEFAULT_NAMESPACES)
        if namespaces:
            self.namespaces.update(namespaces)
        self._triples: dict[Triple, bool] = {}  # triple -> inferred flag

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __iter__(self):
        return iter(self._triples)

    def add(self, triple: Triple, inferred: bool = False) -> None:
        """Insert a triple; asserted beats inferred if added both ways."""

        current = self._triples.get(triple)
        if current is None:
            self._triples[triple] = inferred
        elif current and not inferred:
            self._triples[triple] = False

    def add_all(self, triples: Iterable[Triple], inferred: bool = False) -> None:
        for t in triples:
            self.add(t, inferred)

    def discard(self, triple: Triple) -> None:
        self._triples.pop(triple, None)

    def is_inferred(self, triple: Triple) -> bool:
        return self._triples[triple]

    def triples(self) -> list[Triple]:
        return sorted(self._triples, key=Triple.sort_key)

    def asserted(self) -> list[Triple]:
        return sorted((t for t, inf in self._triples.items() if not inf), key=Triple.sort_key)

    def inferred(self) -> list[Triple]:
        return sorted((t for t, inf in self._triples.items() if inf), key=Triple.sort_key)

    def copy(self) -> "TripleStore":
        dup = TripleStore(self.namespaces)
        dup._triples = dict(self._triples)
        return dup

    def query(
        self,
        subject: Optional[Subject] = None,
        predicate: Optional[Iri] = None,
        object: Optional[Term] = None,
    ) -> list[Triple]:
        """Match a (s, p, o) pattern; None is a wildcard. Deterministic order."""

        out = [
            t
            for t in self._triples
            if (subject is None or t.subject == subject)
            and (predicate is None or t.predicate == predicate)
            and (object is None or t.object == object)
        ]
        out.sort(key=Triple.sort_key)
        return out

    def is_bag(self, term: Term) -> bool:
        if not isinstance(term, (Iri, BlankNode)):
            return False
        marker = Triple(term, Iri(RDF_NS + "type"), Iri(RDF_NS + "Bag"))
        return marker in self._triples

    def expand_members(self, container: Term) -> list[Term]:
        """Members of an rdf:Bag in rdf:_1, rdf:_2, ... order, gap-checked."""

        if not self.is_bag(container):
            raise ContainerError("NOT_A_CONTAINER", f"{container} is not typed rdf:Bag")
        indexed: list[tuple[int, Term]] = []
        for t in self._triples:
            if t.subject != container:
                continue
            m = _MEMBER_RE.match(t.predicate.value)
            if m:
                indexed.append((int(m.group(1)), t.object))
        indexed.sort(key=lambda pair: (pair[0], _term_key(pair[1])))
        for position, (index, _) in enumerate(indexed, start=1):
            if index != position:
                raise ContainerError(
                    "GAP_IN_MEMBERSHIP",
                    f"container {container} membership jumps to rdf:_{index} at position {position}",
                )
        return [term for _, term in indexed]


def add_triple(store: TripleStore, triple: Triple) -> TripleStore:
    store.add(triple)
    return store


@dataclass(frozen=True)
class PropertyDef:
    iri: Iri
    labels: tuple[tuple[str, Optional[str]], ...] = ()  # (text, lang)
    super_properties: frozenset[Iri] = frozenset()


class PropertySchema:
    """Ontology vocabulary: property IRIs, labels, subPropertyOf edges."""

    def __init__(self, properties: Iterable[PropertyDef] = ()):
        self.properties: dict[Iri, PropertyDef] = {}
        for prop in properties:
            self.add(prop)
        self._check_acyclic()

    def add(self, prop: PropertyDef) -> None:
        existing = self.properties.get(prop.iri)
        if existing is not None:
            prop = PropertyDef(
                prop.iri,
                existing.labels + tuple(l for l in prop.labels if l not in existing.labels),
                existing.super_properties | prop.super_properties,
            )
        self.properties[prop.iri] = prop
        self._check_acyclic()

    def merge(self, other: "PropertySchema") -> None:
        for prop in other.properties.values():
            self.add(prop)

    def __len__(self) -> int:
        return len(self.properties)

    def __contains__(self, iri: Iri) -> bool:
        return iri in self.properties

    def _edges(self) -> dict[Iri, frozenset[Iri]]:
        return {iri: prop.super_properties for iri, prop in self.properties.items()}

    def _check_acyclic(self) -> None:
        edges = self._edges()
        visiting: set[Iri] = set()
        done: set[Iri] = set()

        def visit(node: Iri) -> None:
            if node in done:
                return
            if node in visiting:
                raise SchemaError("SCHEMA_CYCLE", f"subPropertyOf cycle through {node}")
            visiting.add(node)
            for parent in edges.get(node, ()):
                visit(parent)
            visiting.discard(node)
            done.add(node)

        for start in edges:
            visit(start)

    def super_closure(self, prop: Iri) -> frozenset[Iri]:
        """Reflexive-transitive closure over subPropertyOf edges."""

        closure: set[Iri] = set()
        stack = [prop]
        while stack:
            node = stack.pop()
            if node in closure:
                continue
            closure.add(node)
            entry = self.properties.get(node)
            if entry is not None:
                stack.extend(entry.super_properties)
        return frozenset(closure)

    def sub_properties(self, prop: Iri) -> frozenset[Iri]:
        """Every declared property whose super-closure contains ``prop``,
        plus ``prop`` itself."""

        subs = {p for p in self.properties if prop in self.super_closure(p)}
        subs.add(prop)
        return frozenset(subs)

    def sorted_properties(self) -> list[PropertyDef]:
        return [self.properties[iri] for iri in sorted(self.properties)]


def saturate(store: TripleStore, schema: PropertySchema) -> TripleStore:
    """Close the store under subPropertyOf: the smallest superset where every
    (s, p, o) also appears as (s, q, o) for each super-property q of p.

    Returns a new store; originals stay asserted, additions are flagged
    inferred.
    """

    result = store.copy()
    strict_supers: dict[Iri, frozenset[Iri]] = {}
    triples = result._triples
    for triple in list(triples):
        supers = strict_supers.get(triple.predicate)
        if supers is None:
            supers = schema.super_closure(triple.predicate) - {triple.predicate}
            strict_supers[triple.predicate] = supers
        for super_prop in supers:
            inferred = Triple(triple.subject, super_prop, triple.object)
            if inferred not in triples:
                triples[inferred] = True
    return result


def related_resources(
    store: TripleStore,
    schema: PropertySchema,
    root: Iri,
    prop: Iri,
    use_inference: bool = False,
) -> list[Term]:
    """Bag-expanded objects related to ``root`` by ``prop`` (or, with
    inference, by any of its sub-properties). Deduplicated, sorted."""

    predicates = schema.sub_properties(prop) if use_inference else frozenset({prop})
    found: set[Term] = set()
    for predicate in predicates:
        for triple in store.query(subject=root, predicate=predicate):
            obj = triple.object
            if store.is_bag(obj):
                found.update(store.expand_members(obj))
            else:
                found.add(obj)
    return sorted(found, key=_term_key)


# --- Line-oriented debug format --------------------------------------------
#
# One triple per line, tab-separated: IRIs in angle brackets, blank nodes
# as _:id, literals quoted with an optional @lang. Used for golden files
# and as the store's persisted link-triple format.


def _term_to_line(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.id}"
    lexical = term.lexical.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    suffix = f"@{term.lang}" if term.lang else ""
    return f'"{lexical}"{suffix}'


def _term_from_line(text: str) -> Term:
    if text.startswith("<") and text.endswith(">"):
        return Iri(text[1:-1])
    if text.startswith("_:"):
        return BlankNode(text[2:])
    if text.startswith('"'):
        end = text.rfind('"')
        if end == 0:
            raise RdfError("BAD_TRIPLE_LINE", f"unterminated literal: {text!r}")
        raw = text[1:end]
        lexical = (
            raw.replace("\\t", "\t").replace("\\n", "\n").replace('\\"', '"').replace("\\\\", "\\")
        )
        rest = text[end + 1 :]
        lang = rest[1:] if rest.startswith("@") else None
        return Literal(lexical, lang)
    raise RdfError("BAD_TRIPLE_LINE", f"cannot parse term {text!r}")


def to_debug_lines(store: TripleStore) -> str:
    lines = []
    for t in store.asserted():
        lines.append(
            "\t".join((_term_to_line(t.subject), _term_to_line(t.predicate), _term_to_line(t.object)))
        )
    return "\n".join(lines) + ("\n" if lines else "")


def from_debug_lines(text: str) -> list[Triple]:
    triples: list[Triple] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise RdfError("BAD_TRIPLE_LINE", f"line {line_no}: expected 3 tab-separated terms")
        subject = _term_from_line(parts[0])
        if isinstance(subject, Literal):
            raise RdfError("BAD_TRIPLE_LINE", f"line {line_no}: subject cannot be a literal")
        predicate = _term_from_line(parts[1])
        if not isinstance(predicate, Iri):
            raise RdfError("BAD_TRIPLE_LINE", f"line {line_no}: predicate must be an IRI")
        triples.append(Triple(subject, predicate, _term_from_line(parts[2])))
    return triples
