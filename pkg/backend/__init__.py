# Backend package for the relational verifier
