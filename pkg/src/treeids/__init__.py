"""Multi-stage decision-tree intrusion detection over NSL-KDD-format data.

Two architectures over four from-scratch tree learners: a sequential
three-phase cascade (binary -> attack category -> attack type, only
attack-flagged records advance) and three independent levels classifying
the same record at increasing granularity. Includes the full
preprocessing pipeline, the evaluation metrics, and a CLI harness.
"""

__version__ = "0.1.0"
