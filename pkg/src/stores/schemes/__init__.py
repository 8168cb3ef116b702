# Discretization scheme providers package
