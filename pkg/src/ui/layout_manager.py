#!/usr/bin/env python3
"""
Layout Manager - Handles column sizing and alignment for text tables
"""


class LayoutManager:
    """Manages column width calculations for terminal tables"""

    def __init__(self, max_width=120, column_gap=2, min_column_width=3):
        self.max_width = max_width
        self.column_gap = column_gap
        self.min_column_width = min_column_width

    def calculate_column_widths(self, headers, rows):
        """Natural width of each column, shrunk from the widest when over max_width"""
        widths = [len(str(h)) for h in headers]
        for row in rows:
            for i, cell in enumerate(row):
                widths[i] = max(widths[i], len(str(cell)))

        available = self.max_width - self.column_gap * (len(widths) - 1)
        while sum(widths) > available:
            widest = max(range(len(widths)), key=lambda i: widths[i])
            if widths[widest] <= self.min_column_width:
                break
            widths[widest] -= 1
        return widths

    @staticmethod
    def fit_cell(value, width):
        """Pad or truncate a cell to its column width"""
        text = str(value)
        if len(text) > width:
            return text[:max(width - 1, 0)] + "…"
        return text.ljust(width)

    def render_table(self, headers, rows):
        widths = self.calculate_column_widths(headers, rows)
        gap = " " * self.column_gap

        def line(cells):
            return gap.join(self.fit_cell(c, w) for c, w in zip(cells, widths)).rstrip()

        lines = [line(headers), gap.join("-" * w for w in widths)]
        lines.extend(line(row) for row in rows)
        return "\n".join(lines) + "\n"

    def render_pairs(self, pairs):
        """Two-column key/value block"""
        pairs = list(pairs)
        if not pairs:
            return ""
        key_width = max(len(str(k)) for k, _ in pairs)
        return "".join(f"{str(k).ljust(key_width)}  {v}\n" for k, v in pairs)
