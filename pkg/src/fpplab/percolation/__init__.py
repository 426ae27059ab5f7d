"""Thresholded fields, box geometry, shells, barriers and black boxes."""
from .barrier import (BarrierResult, BlacknessCache, ClusterResult, KestenShell, PercConfig, ShellContext,
                      b1_violation, black_cube_stats, check_B1, cluster_and_boundary, estimate_rho,
                      exterior_boundary, good_barrier, is_black, kesten_shell, l1_diameter, default_barrier_threshold,
                      pilot_delta)
from .boxes import (Annulus, BoxGeometry, BoxParams, Q_probability, box_crossings, box_geometry,
                    canonical_thin_box, check_Q, checked_box, cube, enlarged_cube, is_x_good, thin_box,
                    visited_cubes)
from .fields import (ChemicalSample, OpenField, OrientedProcess, chemical_distance, chemical_sample,
                     open_field, oriented_edge_processes, oriented_min_passage)

__all__ = [n for n in dir() if not n.startswith("_")]
