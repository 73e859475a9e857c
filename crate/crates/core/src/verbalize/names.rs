/// Fixed pool for the person-named schemes, assigned by variable index.
pub const PERSON_NAMES: [&str; 220] = [
    "Alice",
    "Bob",
    "Carol",
    "David",
    "Emma",
    "Frank",
    "Grace",
    "Henry",
    "Irene",
    "Jack",
    "Karen",
    "Liam",
    "Maria",
    "Nathan",
    "Olivia",
    "Peter",
    "Quinn",
    "Rachel",
    "Samuel",
    "Tina",
    "Ursula",
    "Victor",
    "Wendy",
    "Xavier",
    "Yvonne",
    "Zachary",
    "Aaron",
    "Bella",
    "Caleb",
    "Diana",
    "Ethan",
    "Fiona",
    "George",
    "Hannah",
    "Isaac",
    "Julia",
    "Kevin",
    "Laura",
    "Mason",
    "Nora",
    "Oscar",
    "Paula",
    "Ryan",
    "Sophia",
    "Thomas",
    "Uma",
    "Vincent",
    "Willow",
    "Yusuf",
    "Zoe",
    "Adam",
    "Beatrice",
    "Charles",
    "Daisy",
    "Edward",
    "Eleanor",
    "Felix",
    "Gemma",
    "Harold",
    "Ivy",
    "James",
    "Kate",
    "Lucas",
    "Mia",
    "Noah",
    "Ophelia",
    "Patrick",
    "Rosa",
    "Simon",
    "Tessa",
    "Umar",
    "Violet",
    "Walter",
    "Ximena",
    "Yara",
    "Zane",
    "Albert",
    "Brenda",
    "Cedric",
    "Delia",
    "Elliot",
    "Flora",
    "Gavin",
    "Heidi",
    "Ian",
    "Jasmine",
    "Kyle",
    "Leah",
    "Martin",
    "Nadia",
    "Owen",
    "Penny",
    "Ralph",
    "Sarah",
    "Tobias",
    "Ulrich",
    "Vera",
    "Wesley",
    "Yasmin",
    "Zelda",
    "Alan",
    "Bianca",
    "Colin",
    "Dora",
    "Eric",
    "Freya",
    "Gordon",
    "Hazel",
    "Igor",
    "Joanna",
    "Keith",
    "Lena",
    "Miles",
    "Nina",
    "Otto",
    "Priya",
    "Reuben",
    "Stella",
    "Trevor",
    "Una",
    "Vanessa",
    "Wyatt",
    "Yolanda",
    "Zara",
    "Arthur",
    "Clara",
    "Dennis",
    "Esther",
    "Floyd",
    "Greta",
    "Hugo",
    "Iris",
    "Jonah",
    "Kira",
    "Leon",
    "Maya",
    "Neil",
    "Olga",
    "Philip",
    "Ruth",
    "Sean",
    "Thea",
    "Valentin",
    "Wanda",
    "Abel",
    "Brooke",
    "Conrad",
    "Edith",
    "Fabian",
    "Gloria",
    "Howard",
    "Ingrid",
    "Jerome",
    "Kelly",
    "Lionel",
    "Mabel",
    "Nolan",
    "Opal",
    "Perry",
    "Rita",
    "Stuart",
    "Tara",
    "Vaughn",
    "Winona",
    "Amos",
    "Cora",
    "Damon",
    "Elsa",
    "Frederick",
    "Gwen",
    "Hector",
    "Isla",
    "Jasper",
    "Lara",
    "Marcus",
    "Nell",
    "Orson",
    "Pearl",
    "Rupert",
    "Sylvia",
    "Troy",
    "Victoria",
    "Warren",
    "Yvette",
    "Anton",
    "Cecilia",
    "Declan",
    "Enid",
    "Ferdinand",
    "Harriet",
    "Ivan",
    "Judith",
    "Kurt",
    "Louisa",
    "Morgan",
    "Naomi",
    "Oliver",
    "Phoebe",
    "Roland",
    "Selma",
    "Theo",
    "Vivian",
    "Wilbur",
    "Agnes",
    "Bruno",
    "Chloe",
    "Dominic",
    "Eliza",
    "Gideon",
    "Helena",
    "Jude",
    "Lydia",
    "Magnus",
    "Nico",
    "Petra",
    "Rowan",
    "Silas",
    "Tilda",
    "Viktor",
    "Wren",
];
