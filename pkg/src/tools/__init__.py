"""Maintenance scripts: golden-file regeneration and determinism checks"""
