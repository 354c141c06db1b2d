"""Data sets: CSV loading and synthetic signals."""

from .ingest import DESIGNS, DataSet, heterogeneous_signal, heterogeneous_truth, load_dataset

__all__ = ['DESIGNS', 'DataSet', 'heterogeneous_signal', 'heterogeneous_truth', 'load_dataset']
