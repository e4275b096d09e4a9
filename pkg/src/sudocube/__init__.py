"""Sudo-Cube puzzles: enumeration, symmetry, solving and minimum clues."""
