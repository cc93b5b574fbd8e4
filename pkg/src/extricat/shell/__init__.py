"""Scenario files, catalog cache, reports and the command-line front end."""
