"""Command-line surface and text layout"""

from .layout_manager import LayoutManager

__all__ = ['LayoutManager']
