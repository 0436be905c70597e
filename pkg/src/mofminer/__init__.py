"""MOF literature mining pipeline and crystallographic Q&A service."""

__version__ = "0.1.0"
