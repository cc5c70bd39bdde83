"""chainmine: supply-chain knowledge graph mining from open web text."""

__version__ = "0.1.0"
