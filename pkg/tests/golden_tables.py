"""Frozen reference rows for the two builtin curves.

Each row: (M, L10, lalg, ord2, r, tamagawa) where L10 is the 10-significant-
digit decimal string of |L(E^(eps*M)), 1)| in the table normalization
(|L| / 2^lattice_shift), lalg the exact integer |L^(alg)|, ord2 its 2-adic
valuation, r the number of primes of K over M, and tamagawa maps each prime
factor p of M to the full local factor c_p (so ord2(c_p) = the stored
exponent of 2; every c_p here is 2 or 4).
"""

TABLE_49A = [
    (29, "0.7180139420", 2, 1, 2, {29: 4}),
    (37, "0.6356689731", 2, 1, 2, {37: 4}),
    (109, "0.3703553538", 2, 1, 2, {109: 4}),
    (113, "1.454965333", 8, 3, 2, {113: 4}),
    (137, "0.3303479321", 2, 1, 2, {137: 4}),
    (145, "0.6422111932", 4, 2, 3, {5: 2, 29: 4}),
    (185, "2.274238456", 16, 4, 3, {5: 2, 37: 4}),
    (233, "2.279798298", 18, 1, 2, {233: 4}),
    (265, "4.275446184", 36, 2, 3, {5: 2, 53: 4}),
    (277, "0.9292915388", 8, 3, 2, {277: 4}),
    (281, "0.2306634143", 2, 1, 2, {281: 4}),
    (285, "1.832312031", 16, 4, 3, {3: 2, 5: 2, 19: 2}),
    (317, "0.8686848279", 8, 3, 2, {317: 4}),
    (337, "0.2106283985", 2, 1, 2, {337: 4}),
    (377, "0.3982824745", 4, 2, 3, {13: 2, 29: 4}),
    (389, "1.764410302", 18, 1, 2, {389: 4}),
    (401, "1.737809629", 18, 1, 2, {401: 4}),
    (421, "0.7537907774", 8, 3, 2, {421: 4}),
    (449, "2.919635854", 32, 5, 2, {449: 4}),
    (457, "0.7234920569", 8, 3, 2, {457: 4}),
    (481, "1.410422816", 16, 4, 3, {13: 2, 37: 4}),
    (545, "0.3312558988", 4, 2, 3, {5: 2, 109: 4}),
    (557, "0.6553363680", 8, 3, 2, {557: 4}),
    (565, "0.3253401390", 4, 2, 3, {5: 2, 113: 4}),
    (569, "0.1620972858", 2, 1, 2, {569: 4}),
    (613, "0.1561714487", 2, 1, 2, {613: 4}),
    (617, "0.1556643972", 2, 1, 2, {617: 4}),
    (629, "1.233378974", 16, 4, 3, {17: 2, 37: 4}),
    (641, "0.1527224426", 2, 1, 2, {641: 4}),
    (653, "0.1513126668", 2, 1, 2, {653: 4}),
    (673, "1.341426413", 18, 1, 2, {673: 4}),
    (701, "0.1460403507", 2, 1, 2, {701: 4}),
    (705, "1.165003700", 16, 4, 3, {3: 2, 5: 2, 47: 2}),
    (709, "0.1452140903", 2, 1, 2, {709: 4}),
    (757, "0.1405348183", 2, 1, 2, {757: 4}),
    (809, "0.5437729586", 8, 3, 2, {809: 4}),
    (821, "0.5397843500", 8, 3, 2, {821: 4}),
    (877, "1.175099358", 18, 1, 2, {877: 4}),
    (901, "1.030527220", 16, 4, 3, {17: 2, 53: 4}),
    (953, "0.5010088727", 8, 3, 2, {953: 4}),
    (965, "0.2489420234", 4, 2, 3, {5: 2, 193: 4}),
    (969, "0.9937107192", 16, 4, 3, {3: 2, 17: 2, 19: 2}),
    (977, "1.113338183", 18, 1, 2, {977: 4}),
    (985, "2.217615590", 36, 2, 3, {5: 2, 197: 4}),
]

TABLE_121B = [
    (7, "1.094573405", 4, 2, 1, {7: 2}),
    (43, "0.4416311353", 4, 2, 1, {43: 2}),
    (79, "0.3258219706", 4, 2, 1, {79: 2}),
    (83, "0.3178738964", 4, 2, 1, {83: 2}),
    (107, "0.2799638923", 4, 2, 1, {107: 2}),
    (119, "0.5309460896", 8, 3, 2, {7: 2, 17: 2}),
    (127, "1.027902784", 16, 4, 1, {127: 2}),
    (131, "0.2530219881", 4, 2, 1, {131: 2}),
    (139, "0.2456328864", 4, 2, 1, {139: 2}),
    (151, "0.2356706165", 4, 2, 1, {151: 2}),
    (203, "0.4065143570", 8, 3, 2, {7: 2, 29: 2}),
    (211, "0.7974669169", 16, 4, 1, {211: 2}),
    (227, "0.1922122148", 4, 2, 1, {227: 2}),
    (239, "0.1873246635", 4, 2, 1, {239: 2}),
    (247, "0.3685321923", 8, 3, 2, {13: 2, 19: 2}),
    (263, "0.1785730998", 4, 2, 1, {263: 2}),
    (271, "0.7036703591", 16, 4, 1, {271: 2}),
    (287, "0.3418872925", 8, 3, 2, {7: 2, 41: 2}),
    (307, "2.644506912", 64, 6, 1, {307: 2}),
    (323, "0.3222720533", 8, 3, 2, {17: 2, 19: 2}),
    (347, "0.6218550501", 16, 4, 1, {347: 2}),
    (371, "0.6014048805", 16, 4, 3, {7: 2, 53: 4}),
    (427, "0.2802915271", 8, 3, 2, {7: 2, 61: 2}),
    (431, "0.1394939193", 4, 2, 1, {431: 2}),
    (439, "0.5528682408", 16, 4, 1, {439: 2}),
    (491, "0.5227730093", 16, 4, 1, {491: 2}),
    (503, "0.1291248765", 4, 2, 1, {503: 2}),
    (511, "0.2562202539", 8, 3, 2, {7: 2, 73: 2}),
    (547, "1.981163103", 64, 6, 1, {547: 2}),
    (551, "0.2467448562", 8, 3, 2, {19: 2, 29: 2}),
    (559, "0.2449728774", 8, 3, 2, {13: 2, 43: 2}),
    (563, "0.4882021701", 16, 4, 1, {563: 2}),
    (607, "1.057893809", 36, 2, 1, {607: 2}),
    (659, "0.1128109364", 4, 2, 1, {659: 2}),
    (707, "0.8713129959", 32, 5, 2, {7: 2, 101: 2}),
    (731, "0.2142225669", 8, 3, 2, {17: 2, 43: 2}),
    (739, "0.1065299425", 4, 2, 1, {739: 2}),
    (743, "0.4249711969", 16, 4, 1, {743: 2}),
    (763, "0.8387289424", 32, 5, 2, {7: 2, 109: 2}),
    (787, "1.651682351", 64, 6, 1, {787: 2}),
    (811, "0.9152210367", 36, 2, 1, {811: 2}),
    (887, "0.09723712323", 4, 2, 1, {887: 2}),
    (919, "0.09552920333", 4, 2, 1, {919: 2}),
]

# all special split primes below 1000 for q = 11
SPECIAL_PRIMES_11 = [53, 257, 269, 397, 401, 421, 617, 757, 773, 929]

assert len(TABLE_49A) == 44 and len(TABLE_121B) == 43
