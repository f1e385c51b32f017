"""Satisfiability, inclusion and witnesses for JSON Schema."""
