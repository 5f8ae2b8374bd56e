"""vsmeval: judgment-language-aware evaluation of word vector space models.

Library surface: corpus preprocessing, PPMI bag-of-words vectors,
embedding IO, cosine pair scoring, rank statistics, annotator agreement
protocols, and multilingual model combination (linear interpolation and
CCA). The ``vsmeval`` CLI orchestrates end-to-end pipelines.
"""

__version__ = "0.1.0"
