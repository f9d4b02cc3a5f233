"""heuforge: evolves heuristic programs for combinatorial optimization.

An outer island model steered by structural (tree edit) similarity exchanges
code and natural-language insights between subpopulations, while each island's
inner loop combines UCB-scheduled LLM generation with a differential-evolution
micro-search over the heuristics' numeric constants.
"""

__version__ = "0.1.0"
