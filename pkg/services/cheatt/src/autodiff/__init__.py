"""
Autodiff Module - Reverse-mode differentiation tape
"""
from .tape import Node, Tape

__all__ = ['Node', 'Tape']
