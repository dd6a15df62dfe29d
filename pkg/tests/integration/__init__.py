"""Integration tests across modules and the command line."""
