"""
Pipeline stage tools. Each module exposes its operations as functions and
wraps them in a BaseTool returning success/error result dicts.
"""
