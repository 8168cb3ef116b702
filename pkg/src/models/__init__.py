# Models package
# Data models (MeshModel, ReportModel) import the numerical core, which itself imports
# src.models.schemas; import them from their modules to keep package import acyclic.
