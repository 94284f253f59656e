"""Allow running as: python3 -m netfair"""
from .main import run

if __name__ == '__main__':
    run()
