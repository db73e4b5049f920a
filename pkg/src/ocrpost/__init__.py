"""Multi-level post-processing for syllable-based character recognition.

Turns per-character (candidate, distance) lists from a recognition device
into a single corrected word sequence by cascading candidate selection,
dictionary- and connectivity-constrained morphological analysis, trigram
HMM tagging, and mutual-information co-occurrence scoring.
"""

__version__ = "0.1.0"
