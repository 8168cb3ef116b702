# Scheme provider implementations
