"""RDF/XML codec for the exact subset the card infrastructure exchanges.

Supported on load: rdf:Description elements with rdf:about whose property
elements carry an rdf:resource attribute, literal text content with an
optional xml:lang, or a single rdf:Bag of rdf:li members; and rdf:Property
schema entries (rdf:ID against the document base) with rdfs:subPropertyOf
and rdfs:label children. Anything else is rejected with the element path.

Serialization is the inverse, byte-deterministic for a given store:
subjects and predicates sorted, bags nested, namespaces declared once on
the root.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from typing import Optional

from knowcard.rdf import (
    RDF_NS,
    RDFS_NS,
    BlankNode,
    Iri,
    Literal,
    PropertyDef,
    PropertySchema,
    RdfError,
    Term,
    Triple,
    TripleStore,
    _SCHEME_RE,
)

XML_NS = "http://www.w3.org/XML/1998/namespace"

_RDF_RDF = f"{{{RDF_NS}}}RDF"
_RDF_DESCRIPTION = f"{{{RDF_NS}}}Description"
_RDF_PROPERTY = f"{{{RDF_NS}}}Property"
_RDF_BAG = f"{{{RDF_NS}}}Bag"
_RDF_SEQ = f"{{{RDF_NS}}}Seq"
_RDF_ALT = f"{{{RDF_NS}}}Alt"
_RDF_LI = f"{{{RDF_NS}}}li"
_RDF_ABOUT = f"{{{RDF_NS}}}about"
_RDF_ID = f"{{{RDF_NS}}}ID"
_RDF_RESOURCE = f"{{{RDF_NS}}}resource"
_RDFS_SUBPROPERTYOF = f"{{{RDFS_NS}}}subPropertyOf"
_RDFS_LABEL = f"{{{RDFS_NS}}}label"
_XML_BASE = f"{{{XML_NS}}}base"
_XML_LANG = f"{{{XML_NS}}}lang"

_NCNAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*\Z")


class RdfXmlError(RdfError):
    """MALFORMED_XML or UNSUPPORTED_RDFXML (with the offending element path)."""

    def __init__(self, code: str, message: str, path: Optional[str] = None):
        super().__init__(code, message if path is None else f"{path}: {message}")
        self.path = path


def _display_name(tag: str, namespaces: dict[str, str]) -> str:
    if tag.startswith("{"):
        uri, _, local = tag[1:].partition("}")
        for prefix, known in namespaces.items():
            if known == uri:
                return f"{prefix}:{local}"
        return f"{{{uri}}}{local}"
    return tag


def _unsupported(message: str, path: str) -> RdfXmlError:
    return RdfXmlError("UNSUPPORTED_RDFXML", message, path)


def _resolve_ref(ref: str, base: Optional[str], path: str) -> Iri:
    ref = ref.strip()
    if ref.startswith("#"):
        if base is None:
            raise _unsupported(f"relative reference {ref!r} without a document base", path)
        return Iri(base + ref)
    if _SCHEME_RE.match(ref):
        return Iri(ref)
    raise _unsupported(f"reference {ref!r} is neither absolute nor a #fragment", path)


def load_rdfxml(
    document: str,
    base: Optional[str] = None,
    namespaces: Optional[dict[str, str]] = None,
) -> tuple[list[Triple], PropertySchema]:
    """Parse an RDF/XML document into triples plus any schema entries."""

    from knowcard.rdf import DEFAULT_NAMESPACES

    nsmap = dict(DEFAULT_NAMESPACES)
    if namespaces:
        nsmap.update(namespaces)

    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise RdfXmlError("MALFORMED_XML", str(exc)) from None

    if root.tag != _RDF_RDF:
        raise _unsupported(
            f"root element must be rdf:RDF, got {_display_name(root.tag, nsmap)}", "/"
        )
    base = root.get(_XML_BASE, base)

    triples: list[Triple] = []
    props: list[PropertyDef] = []
    blank_counter = 0

    def fresh_blank() -> BlankNode:
        nonlocal blank_counter
        blank_counter += 1
        return BlankNode(f"b{blank_counter}")

    root_path = "/" + _display_name(root.tag, nsmap)
    for i, child in enumerate(root, start=1):
        child_path = f"{root_path}/{_display_name(child.tag, nsmap)}[{i}]"
        if child.tag == _RDF_DESCRIPTION:
            _load_description(child, child_path, base, nsmap, triples, fresh_blank)
        elif child.tag == _RDF_PROPERTY:
            props.append(_load_property(child, child_path, base, nsmap))
        else:
            raise _unsupported("only rdf:Description and rdf:Property are supported", child_path)

    return triples, PropertySchema(props)


def _require_no_text(elem: ET.Element, path: str) -> None:
    texts = [elem.text or ""] + [sub.tail or "" for sub in elem]
    if any(t.strip() for t in texts):
        raise _unsupported("unexpected text content", path)


def _load_description(
    elem: ET.Element,
    path: str,
    base: Optional[str],
    nsmap: dict[str, str],
    triples: list[Triple],
    fresh_blank,
) -> None:
    about = elem.get(_RDF_ABOUT)
    if about is None:
        raise _unsupported("rdf:Description requires rdf:about", path)
    extra = set(elem.attrib) - {_RDF_ABOUT}
    if extra:
        raise _unsupported(
            f"unsupported attribute(s) {sorted(_display_name(a, nsmap) for a in extra)}", path
        )
    subject = _resolve_ref(about, base, path)
    _require_no_text(elem, path)

    for j, prop_elem in enumerate(elem, start=1):
        prop_path = f"{path}/{_display_name(prop_elem.tag, nsmap)}[{j}]"
        if prop_elem.tag in (_RDF_BAG, _RDF_SEQ, _RDF_ALT, _RDF_LI):
            raise _unsupported("container element cannot be a property", prop_path)
        if not prop_elem.tag.startswith("{"):
            raise _unsupported("property element must be namespace-qualified", prop_path)
        uri, _, local = prop_elem.tag[1:].partition("}")
        predicate = Iri(uri + local)

        resource = prop_elem.get(_RDF_RESOURCE)
        extra = set(prop_elem.attrib) - {_RDF_RESOURCE, _XML_LANG}
        if extra:
            raise _unsupported(
                f"unsupported attribute(s) {sorted(_display_name(a, nsmap) for a in extra)}",
                prop_path,
            )
        children = list(prop_elem)

        if resource is not None:
            if children or (prop_elem.text or "").strip():
                raise _unsupported("rdf:resource excludes nested content", prop_path)
            triples.append(Triple(subject, predicate, _resolve_ref(resource, base, prop_path)))
        elif children:
            if len(children) != 1 or children[0].tag != _RDF_BAG:
                raise _unsupported("only a single rdf:Bag child is supported", prop_path)
            _require_no_text(prop_elem, prop_path)
            bag = fresh_blank()
            triples.append(Triple(bag, Iri(RDF_NS + "type"), Iri(RDF_NS + "Bag")))
            bag_elem = children[0]
            bag_path = f"{prop_path}/rdf:Bag"
            _require_no_text(bag_elem, bag_path)
            index = 0
            for li in bag_elem:
                li_path = f"{bag_path}/{_display_name(li.tag, nsmap)}[{index + 1}]"
                if li.tag != _RDF_LI:
                    raise _unsupported("rdf:Bag may contain only rdf:li", li_path)
                li_resource = li.get(_RDF_RESOURCE)
                if li_resource is None or set(li.attrib) - {_RDF_RESOURCE}:
                    raise _unsupported("rdf:li must carry exactly rdf:resource", li_path)
                if len(li) or (li.text or "").strip():
                    raise _unsupported("rdf:li must be empty", li_path)
                index += 1
                triples.append(
                    Triple(bag, Iri(f"{RDF_NS}_{index}"), _resolve_ref(li_resource, base, li_path))
                )
            triples.append(Triple(subject, predicate, bag))
        else:
            lang = prop_elem.get(_XML_LANG)
            triples.append(Triple(subject, predicate, Literal(prop_elem.text or "", lang)))


def _load_property(
    elem: ET.Element, path: str, base: Optional[str], nsmap: dict[str, str]
) -> PropertyDef:
    prop_id = elem.get(_RDF_ID)
    if prop_id is None:
        raise _unsupported("rdf:Property requires rdf:ID", path)
    if set(elem.attrib) - {_RDF_ID}:
        raise _unsupported("unsupported attribute on rdf:Property", path)
    if base is None:
        raise _unsupported("rdf:ID requires a document base (xml:base)", path)
    iri = Iri(f"{base}#{prop_id.strip()}")
    _require_no_text(elem, path)

    labels: list[tuple[str, Optional[str]]] = []
    supers: set[Iri] = set()
    for j, child in enumerate(elem, start=1):
        child_path = f"{path}/{_display_name(child.tag, nsmap)}[{j}]"
        if child.tag == _RDFS_SUBPROPERTYOF:
            resource = child.get(_RDF_RESOURCE)
            if resource is None or set(child.attrib) - {_RDF_RESOURCE}:
                raise _unsupported("rdfs:subPropertyOf must carry exactly rdf:resource", child_path)
            supers.add(_resolve_ref(resource, base, child_path))
        elif child.tag == _RDFS_LABEL:
            if set(child.attrib) - {_XML_LANG}:
                raise _unsupported("rdfs:label allows only xml:lang", child_path)
            labels.append((child.text or "", child.get(_XML_LANG)))
        else:
            raise _unsupported("unsupported child of rdf:Property", child_path)
    return PropertyDef(iri, tuple(labels), frozenset(supers))


# --- Serialization ----------------------------------------------------------


def _xml_escape(text: str, quote: bool = False) -> str:
    text = text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    if quote:
        text = text.replace('"', "&quot;")
    return text


def _split_iri(iri: Iri) -> tuple[str, str]:
    value = iri.value
    for sep in ("#", "/"):
        idx = value.rfind(sep)
        if idx != -1 and _NCNAME_RE.match(value[idx + 1 :] or ""):
            return value[: idx + 1], value[idx + 1 :]
    raise RdfXmlError("UNSUPPORTED_RDFXML", f"cannot split {value!r} into namespace and local name")


def _schema_base(schema: PropertySchema) -> Optional[str]:
    bases = set()
    for prop in schema.properties:
        if "#" not in prop.value:
            raise RdfXmlError(
                "UNSUPPORTED_RDFXML", f"schema property {prop.value!r} has no #fragment"
            )
        bases.add(prop.value.rsplit("#", 1)[0])
    if not bases:
        return None
    if len(bases) > 1:
        raise RdfXmlError(
            "UNSUPPORTED_RDFXML", f"schema properties span multiple bases: {sorted(bases)}"
        )
    return bases.pop()


def serialize_rdfxml(store: TripleStore, schema: Optional[PropertySchema] = None) -> str:
    """Render asserted triples (and schema entries) as RDF/XML text."""

    schema = schema if schema is not None else PropertySchema()
    asserted = store.asserted()

    bag_nodes = {
        t.subject
        for t in asserted
        if t.predicate == Iri(RDF_NS + "type") and t.object == Iri(RDF_NS + "Bag")
    }
    bag_refs: dict[Term, int] = {b: 0 for b in bag_nodes}

    by_subject: dict[Iri, list[Triple]] = {}
    for t in asserted:
        if t.subject in bag_nodes:
            continue  # folded into the nested Bag
        if isinstance(t.subject, BlankNode):
            raise RdfXmlError(
                "UNSUPPORTED_RDFXML", f"blank subject {t.subject} is not a referenced Bag"
            )
        if t.object in bag_refs:
            bag_refs[t.object] += 1
        elif isinstance(t.object, BlankNode):
            raise RdfXmlError("UNSUPPORTED_RDFXML", f"blank object {t.object} is not a typed Bag")
        by_subject.setdefault(t.subject, []).append(t)

    for bag, count in bag_refs.items():
        if count != 1:
            raise RdfXmlError(
                "UNSUPPORTED_RDFXML", f"Bag {bag} referenced {count} times (exactly 1 supported)"
            )

    # assign prefixes: known namespaces first, then fresh ns1, ns2, ...
    prefix_of: dict[str, str] = {}
    for prefix, uri in sorted(store.namespaces.items()):
        prefix_of.setdefault(uri, prefix)

    needed: set[str] = {RDF_NS}

    def note(iri: Iri) -> tuple[str, str]:
        ns, local = _split_iri(iri)
        needed.add(ns)
        return ns, local

    for triples in by_subject.values():
        for t in triples:
            note(t.predicate)
    if schema.properties:
        needed.add(RDFS_NS)

    fresh = 0
    for ns in sorted(needed):
        if ns not in prefix_of:
            fresh += 1
            prefix_of[ns] = f"ns{fresh}"

    def qname(iri: Iri) -> str:
        ns, local = _split_iri(iri)
        return f"{prefix_of[ns]}:{local}"

    base = _schema_base(schema)
    lines: list[str] = ['<?xml version="1.0" encoding="UTF-8"?>']
    attrs = [
        f'xmlns:{prefix_of[ns]}="{_xml_escape(ns, quote=True)}"'
        for ns in sorted(needed, key=lambda n: prefix_of[n])
    ]
    if base is not None:
        attrs.append(f'xml:base="{_xml_escape(base, quote=True)}"')
    lines.append(f'<{prefix_of[RDF_NS]}:RDF {" ".join(attrs)}>')

    rdf_p = prefix_of[RDF_NS]
    for prop in schema.sorted_properties():
        local = prop.iri.value.rsplit("#", 1)[1]
        lines.append(f'  <{rdf_p}:Property {rdf_p}:ID="{_xml_escape(local, quote=True)}">')
        for super_prop in sorted(prop.super_properties):
            if base is not None and super_prop.value.startswith(base + "#"):
                ref = "#" + super_prop.value[len(base) + 1 :]
            else:
                ref = super_prop.value
            lines.append(
                f'    <{prefix_of[RDFS_NS]}:subPropertyOf {rdf_p}:resource="{_xml_escape(ref, quote=True)}"/>'
            )
        for text, lang in prop.labels:
            lang_attr = f' xml:lang="{_xml_escape(lang, quote=True)}"' if lang else ""
            lines.append(
                f"    <{prefix_of[RDFS_NS]}:label{lang_attr}>{_xml_escape(text)}</{prefix_of[RDFS_NS]}:label>"
            )
        lines.append(f"  </{rdf_p}:Property>")

    def predicate_sort_key(t: Triple):
        return (t.predicate.value, t.sort_key())

    for subject in sorted(by_subject):
        lines.append(f'  <{rdf_p}:Description {rdf_p}:about="{_xml_escape(subject.value, quote=True)}">')
        for t in sorted(by_subject[subject], key=predicate_sort_key):
            name = qname(t.predicate)
            obj = t.object
            if isinstance(obj, Iri):
                lines.append(f'    <{name} {rdf_p}:resource="{_xml_escape(obj.value, quote=True)}"/>')
            elif isinstance(obj, Literal):
                lang_attr = f' xml:lang="{_xml_escape(obj.lang, quote=True)}"' if obj.lang else ""
                lines.append(f"    <{name}{lang_attr}>{_xml_escape(obj.lexical)}</{name}>")
            else:  # referenced Bag
                lines.append(f"    <{name}>")
                lines.append(f"      <{rdf_p}:Bag>")
                for member in store.expand_members(obj):
                    if not isinstance(member, Iri):
                        raise RdfXmlError(
                            "UNSUPPORTED_RDFXML", f"Bag member {member} must be a resource"
                        )
                    lines.append(
                        f'        <{rdf_p}:li {rdf_p}:resource="{_xml_escape(member.value, quote=True)}"/>'
                    )
                lines.append(f"      </{rdf_p}:Bag>")
                lines.append(f"    </{name}>")
        lines.append(f"  </{rdf_p}:Description>")

    lines.append(f"</{rdf_p}:RDF>")
    return "\n".join(lines) + "\n"
