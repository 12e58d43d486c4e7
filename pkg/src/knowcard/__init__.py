"""knowcard: typed design-knowledge cards with constraint checking, RDF
links, XML interchange, and a capture/viewing service."""

__version__ = "0.1.0"
