"""Numerical core: ladder, systems, engine, density, metrics"""
