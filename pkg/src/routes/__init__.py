"""HTTP routers: base (welcome, health) and schemes (solve, converge, infsup)"""

__all__: list[str] = ["base", "schemes"]
