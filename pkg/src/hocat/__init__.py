"""hocat: finitely presented categories enriched over a computable model base."""

__version__ = "0.1.0"
