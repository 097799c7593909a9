"""Adaptive sliding-window RRT frontier detection and 2D exploration benchmarking."""
