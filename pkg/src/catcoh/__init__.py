"""catcoh: exact simulation of repeated use of a coherence reservoir"""
__version__ = "0.1.0"
