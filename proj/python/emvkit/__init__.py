from ._emvkit import *  # noqa: F401,F403
