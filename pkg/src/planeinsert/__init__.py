"""planeinsert: edge insertion into fixed plane drawings, k crossings per edge."""

__version__ = "0.1.0"
