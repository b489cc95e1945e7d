"""
Written into every run manifest so a result directory can be traced back to the code that produced it.
"""

version = "0.4.1"
