# Path-Factor Toolkit - Source Package
