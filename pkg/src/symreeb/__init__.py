"""Index theory and equivariant F2 algebra for symmetric Reeb dynamics."""

__version__ = "0.1.0"
