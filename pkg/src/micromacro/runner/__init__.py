"""Orchestration: configuration, time loops, case registry, serialization,
parallel domain decomposition, and the scaling harness."""
