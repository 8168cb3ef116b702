# Numerical kernels (geometry, quadrature, RT0, stencils, norms) and the application factory
