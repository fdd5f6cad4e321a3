"""
Test Suite for Context Windows Lab

This package contains all unit and integration tests for the project.
"""
