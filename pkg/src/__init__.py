"""Noise-tolerant alarm correlation miner."""
