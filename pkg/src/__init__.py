# DualFlux package
