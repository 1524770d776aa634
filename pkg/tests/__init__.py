# Test package for Stem Workbench
