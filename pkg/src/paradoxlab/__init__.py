"""Machine-checked Liar, Curry and validity-Curry derivations under switchable logics."""

__version__ = "0.1.0"
