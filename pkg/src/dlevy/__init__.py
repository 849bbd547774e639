"""Simulation and Monte Carlo verification of D-valued alpha-stable Levy motions."""
