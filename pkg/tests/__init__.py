# Path-Factor Toolkit - Tests Package
