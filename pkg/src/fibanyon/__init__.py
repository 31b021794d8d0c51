"""fibanyon: Fibonacci-anyon topological quantum computation workbench.

Subpackages cover the fusion-category data (:mod:`fibanyon.anyon_model`),
braid-group representations and the logical qubit
(:mod:`fibanyon.braid_space`), braid-word compilation
(:mod:`fibanyon.braid_compiler`), an open-system two-qubit simulator
(:mod:`fibanyon.noise_engine`), gate characterization protocols
(:mod:`fibanyon.benchmark_suite`), thermal anyon-pair robustness scenarios
(:mod:`fibanyon.robustness_lab`) and the command-line driver
(:mod:`fibanyon.cli`).
"""

__version__ = "0.1.0"
