"""Backend source package for Noise-Stable MDS."""
