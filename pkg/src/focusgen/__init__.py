"""focusgen: specification documents generated from component-network models."""

__version__ = "0.1.0"
