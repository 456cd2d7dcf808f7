"""
anyonlab - Main Entry Point
F-symbol solver and braid-group gate explorer
"""

from core.app import create_cli

# Create the command group
cli = create_cli()

if __name__ == "__main__":
    cli()
