"""
CheAtt service: polynomial attention filters for tabular Transformers
"""
