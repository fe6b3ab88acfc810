"""pixeldoc: pixel-level language modelling toolkit for document scans.

Synthetic historical-looking scan generation, 2D span masking, a small
masked-autoencoder vision transformer with sequence and patch heads,
OCR-aligned QA label masks and metrics, and cosine-similarity scan search.
"""

__version__ = "0.1.0"
