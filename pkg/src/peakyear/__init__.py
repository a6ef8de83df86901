"""Citation-network disruption scoring and peak-year career analysis.

The pipeline runs in stages: parse a publication corpus, build an immutable
citation graph, score every paper's disruption, assemble long-lived careers,
compare observed innovation peaks against a shuffled benchmark, and fit
standardized OLS models relating peak-year innovation and impact to
effort-related variables. Synthetic corpora make the whole chain testable
at desk scale.
"""

__version__ = "0.1.0"
