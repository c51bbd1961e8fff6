# Tests for autonomic_agents package
