"""Resource augmentation experiments for paging, selfish routing and scheduling."""

__version__ = "0.1.0"
