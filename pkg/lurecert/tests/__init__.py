"""
Tests for lurecert
"""
