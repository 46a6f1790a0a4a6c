"""
Run configuration: properties-file parsing and static scheme tables.
"""
