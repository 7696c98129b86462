"""
epilab - Source Package
"""

__version__ = "1.0.0"
__author__ = "epilab developers"
__description__ = "Exact laboratory for epimorphisms of finite commutative rings"
