"""Shared utilities: errors and logging, file formats, presets, worker pool, plotting."""
