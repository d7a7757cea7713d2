"""Locally symmetric Kähler-Einstein structures on the punctured cotangent bundle of a sphere."""
