"""Bitmap glyph tables for the built-in font (printable ASCII, 15-row cells)."""

CELL_HEIGHT = 15
BASELINE = 12

# char -> (advance_px, per-row bitmasks, MSB = leftmost column)
GLYPHS = {
    ' ': (3, (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0)),
    '!': (3, (0, 0, 2, 2, 2, 2, 2, 2, 2, 0, 2, 2, 0, 0, 0)),
    '"': (6, (0, 10, 10, 10, 10, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0)),
    '#': (8, (0, 0, 18, 20, 20, 126, 20, 32, 126, 40, 40, 40, 0, 0, 0)),
    '$': (9, (16, 16, 124, 118, 82, 112, 120, 30, 22, 210, 246, 124, 16, 0, 0)),
    '%': (11, (0, 0, 900, 712, 728, 912, 32, 108, 86, 210, 150, 284, 0, 0, 0)),
    '&': (9, (0, 0, 120, 192, 128, 196, 127, 196, 132, 132, 196, 124, 0, 0, 0)),
    "'": (3, (0, 2, 2, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0)),
    '(': (5, (0, 2, 2, 6, 4, 4, 4, 4, 4, 4, 6, 2, 3, 0, 0)),
    ')': (5, (0, 8, 8, 12, 12, 4, 4, 4, 4, 12, 8, 8, 16, 0, 0)),
    '*': (9, (0, 0, 0, 0, 0, 16, 16, 124, 56, 40, 64, 0, 0, 0, 0)),
    '+': (9, (0, 0, 0, 0, 16, 16, 16, 254, 16, 16, 16, 0, 0, 0, 0)),
    ',': (3, (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 6, 4, 4, 0)),
    '-': (4, (0, 0, 0, 0, 0, 0, 0, 14, 0, 0, 0, 0, 0, 0, 0)),
    '.': (3, (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 0)),
    '/': (4, (0, 1, 1, 1, 2, 2, 2, 4, 4, 4, 8, 8, 0, 0, 0)),
    '0': (8, (0, 0, 60, 98, 99, 65, 65, 65, 65, 99, 98, 60, 0, 0, 0)),
    '1': (8, (0, 0, 12, 60, 36, 4, 4, 4, 4, 4, 4, 4, 0, 0, 0)),
    '2': (8, (0, 0, 28, 38, 98, 2, 6, 12, 24, 16, 32, 126, 0, 0, 0)),
    '3': (8, (0, 0, 60, 102, 66, 6, 28, 6, 2, 194, 70, 60, 0, 0, 0)),
    '4': (8, (0, 0, 6, 6, 10, 18, 50, 34, 127, 2, 2, 2, 0, 0, 0)),
    '5': (8, (0, 0, 126, 64, 64, 124, 102, 6, 2, 198, 70, 60, 0, 0, 0)),
    '6': (8, (0, 0, 30, 35, 97, 94, 99, 67, 65, 67, 98, 60, 0, 0, 0)),
    '7': (8, (0, 0, 127, 3, 2, 6, 4, 8, 8, 16, 48, 32, 0, 0, 0)),
    '8': (8, (0, 0, 60, 102, 66, 102, 60, 102, 66, 66, 102, 60, 0, 0, 0)),
    '9': (8, (0, 0, 60, 102, 66, 66, 102, 62, 2, 70, 100, 56, 0, 0, 0)),
    ':': (3, (0, 0, 0, 0, 2, 2, 0, 0, 0, 0, 2, 2, 0, 0, 0)),
    ';': (3, (0, 0, 0, 0, 2, 2, 0, 0, 0, 0, 0, 2, 4, 4, 0)),
    '<': (8, (0, 0, 0, 0, 0, 4, 24, 96, 96, 24, 12, 0, 0, 0, 0)),
    '=': (8, (0, 0, 0, 0, 0, 126, 0, 0, 126, 0, 0, 0, 0, 0, 0)),
    '>': (8, (0, 0, 0, 0, 0, 96, 56, 12, 4, 24, 96, 0, 0, 0, 0)),
    '?': (8, (0, 0, 60, 102, 66, 6, 4, 8, 16, 0, 16, 16, 0, 0, 0)),
    '@': (12, (0, 0, 0, 248, 396, 758, 1942, 1298, 1330, 1334, 1500, 1536, 792, 496, 0)),
    'A': (9, (0, 0, 24, 56, 40, 44, 68, 124, 70, 194, 130, 387, 0, 0, 0)),
    'B': (10, (0, 0, 248, 140, 132, 140, 248, 132, 130, 130, 134, 252, 0, 0, 0)),
    'C': (10, (0, 0, 124, 198, 386, 256, 256, 256, 256, 386, 196, 120, 0, 0, 0)),
    'D': (11, (0, 0, 504, 268, 262, 262, 258, 258, 262, 262, 268, 504, 0, 0, 0)),
    'E': (9, (0, 0, 126, 64, 64, 64, 126, 64, 64, 64, 64, 126, 0, 0, 0)),
    'F': (8, (0, 0, 63, 32, 32, 32, 63, 32, 32, 32, 32, 32, 0, 0, 0)),
    'G': (10, (0, 0, 120, 198, 390, 256, 256, 286, 258, 390, 206, 122, 0, 0, 0)),
    'H': (10, (0, 0, 130, 130, 130, 130, 130, 254, 130, 130, 130, 130, 0, 0, 0)),
    'I': (4, (0, 0, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 0, 0, 0)),
    'J': (8, (0, 0, 2, 2, 2, 2, 2, 2, 66, 66, 102, 60, 0, 0, 0)),
    'K': (9, (0, 0, 67, 70, 76, 72, 80, 112, 88, 76, 70, 67, 0, 0, 0)),
    'L': (9, (0, 0, 64, 64, 64, 64, 64, 64, 64, 64, 64, 126, 0, 0, 0)),
    'M': (12, (0, 0, 774, 774, 910, 650, 650, 730, 594, 594, 626, 610, 0, 0, 0)),
    'N': (10, (0, 0, 194, 194, 162, 162, 146, 146, 154, 138, 142, 134, 0, 0, 0)),
    'O': (11, (0, 0, 248, 396, 774, 518, 514, 514, 518, 774, 396, 248, 0, 0, 0)),
    'P': (9, (0, 0, 124, 70, 66, 66, 70, 124, 64, 64, 64, 64, 0, 0, 0)),
    'Q': (11, (0, 0, 248, 396, 774, 518, 514, 514, 518, 774, 396, 254, 0, 0, 0)),
    'R': (10, (0, 0, 252, 134, 130, 130, 134, 252, 132, 134, 134, 130, 0, 0, 0)),
    'S': (8, (0, 0, 60, 102, 66, 96, 56, 12, 6, 194, 102, 60, 0, 0, 0)),
    'T': (9, (0, 0, 255, 8, 8, 8, 8, 8, 8, 8, 8, 8, 0, 0, 0)),
    'U': (10, (0, 0, 130, 130, 130, 130, 130, 130, 130, 134, 198, 124, 0, 0, 0)),
    'V': (9, (0, 0, 131, 130, 194, 70, 68, 100, 44, 40, 56, 24, 0, 0, 0)),
    'W': (13, (0, 0, 6241, 2145, 2275, 3250, 3250, 1170, 1430, 1820, 1820, 780, 0, 0, 0)),
    'X': (9, (0, 0, 130, 198, 108, 40, 56, 56, 40, 68, 198, 130, 0, 0, 0)),
    'Y': (8, (0, 0, 65, 99, 34, 54, 28, 24, 8, 8, 8, 8, 0, 0, 0)),
    'Z': (9, (0, 0, 254, 6, 12, 8, 16, 48, 32, 64, 192, 254, 0, 0, 0)),
    '[': (5, (7, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 7, 0, 0)),
    '\\': (4, (0, 8, 8, 4, 4, 4, 2, 2, 2, 1, 1, 1, 0, 0, 0)),
    ']': (4, (14, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 14, 0, 0)),
    '^': (8, (0, 0, 0, 24, 24, 52, 36, 36, 66, 0, 0, 0, 0, 0, 0)),
    '_': (7, (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 62, 0, 0)),
    '`': (4, (0, 4, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0)),
    'a': (8, (0, 0, 0, 0, 60, 102, 66, 30, 98, 66, 70, 58, 0, 0, 0)),
    'b': (9, (0, 128, 128, 128, 188, 196, 134, 130, 130, 134, 196, 184, 0, 0, 0)),
    'c': (8, (0, 0, 0, 0, 60, 102, 66, 64, 64, 66, 102, 60, 0, 0, 0)),
    'd': (9, (0, 2, 2, 2, 126, 198, 134, 130, 130, 134, 198, 122, 0, 0, 0)),
    'e': (8, (0, 0, 0, 0, 60, 102, 66, 126, 64, 66, 102, 60, 0, 0, 0)),
    'f': (4, (0, 7, 4, 4, 15, 4, 4, 4, 4, 4, 4, 4, 0, 0, 0)),
    'g': (9, (0, 0, 0, 0, 126, 198, 134, 130, 130, 134, 198, 122, 134, 198, 124)),
    'h': (8, (0, 64, 64, 64, 92, 102, 66, 66, 66, 66, 66, 66, 0, 0, 0)),
    'i': (3, (0, 2, 2, 0, 2, 2, 2, 2, 2, 2, 2, 2, 0, 0, 0)),
    'j': (3, (0, 2, 2, 0, 2, 2, 2, 2, 2, 2, 2, 2, 2, 6, 6)),
    'k': (7, (0, 32, 32, 32, 35, 38, 44, 56, 56, 44, 38, 35, 0, 0, 0)),
    'l': (3, (0, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 3, 0, 0, 0)),
    'm': (11, (0, 0, 0, 0, 988, 886, 546, 546, 546, 546, 546, 546, 0, 0, 0)),
    'n': (8, (0, 0, 0, 0, 92, 102, 66, 66, 66, 66, 66, 66, 0, 0, 0)),
    'o': (9, (0, 0, 0, 0, 120, 196, 134, 130, 130, 134, 196, 120, 0, 0, 0)),
    'p': (9, (0, 0, 0, 0, 188, 196, 134, 130, 130, 134, 196, 184, 128, 128, 128)),
    'q': (9, (0, 0, 0, 0, 126, 198, 134, 130, 130, 134, 198, 122, 2, 2, 2)),
    'r': (4, (0, 0, 0, 0, 5, 6, 4, 4, 4, 4, 4, 4, 0, 0, 0)),
    's': (7, (0, 0, 0, 0, 28, 38, 32, 56, 14, 2, 38, 28, 0, 0, 0)),
    't': (5, (0, 0, 4, 4, 15, 4, 4, 4, 4, 4, 4, 6, 0, 0, 0)),
    'u': (8, (0, 0, 0, 0, 66, 66, 66, 66, 66, 70, 102, 62, 0, 0, 0)),
    'v': (7, (0, 0, 0, 0, 97, 99, 34, 50, 22, 20, 28, 12, 0, 0, 0)),
    'w': (11, (0, 0, 0, 0, 1571, 1651, 594, 594, 854, 476, 396, 396, 0, 0, 0)),
    'x': (7, (0, 0, 0, 0, 98, 38, 20, 24, 24, 52, 38, 98, 0, 0, 0)),
    'y': (7, (0, 0, 0, 0, 97, 35, 34, 50, 22, 20, 28, 12, 8, 24, 48)),
    'z': (8, (0, 0, 0, 0, 62, 6, 12, 8, 24, 48, 96, 126, 0, 0, 0)),
    '{': (4, (3, 2, 2, 2, 2, 6, 4, 6, 2, 2, 2, 2, 3, 0, 0)),
    '|': (4, (2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2)),
    '}': (5, (12, 4, 4, 4, 4, 4, 6, 4, 4, 4, 4, 4, 12, 0, 0)),
    '~': (8, (0, 0, 0, 0, 0, 0, 0, 118, 78, 0, 0, 0, 0, 0, 0)),
}
