# Pluggable providers selected by enum through a factory
