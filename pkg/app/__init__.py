# MODS 宽基线双视图匹配引擎
__version__ = "1.0.0"
