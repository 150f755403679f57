"""Small helpers shared by the pyentrain modules
"""
