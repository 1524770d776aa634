# Stem Workbench - source package root
