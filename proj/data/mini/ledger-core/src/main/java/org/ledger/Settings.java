package org.ledger;

public class Settings {
    /*
     * this is useless except to provide backwards compatibility in
     * phi_convict_threshold because everyone seems pretty accustomed
     * to the default of 8
     */
    private double phiConvictThreshold = 8;

    // These are outdated but we'll probably keep them
    // forever anyway for backwards compatibility.
    public static final String MODE_A = "a";
    public static final String MODE_B = "b";

    // Must develop a strategy for upgrading from older SubscriptionWrapper versions to newer versions.
    private int wrapperVersion = 2;

    /**
     * @deprecated use newMethod() instead
     */
    @Deprecated
    public void oldMethod() {
        newMethod();
    }

    public void newMethod() {
        String marker = "// not a comment, just a string with /* markers */";
        System.out.println(marker);
    }

    // Some of these internal IDs are outdated and don't represent what these challenges do.
    private static final int[] CHALLENGE_IDS = {1, 2, 3};

    // the algorithm to follow to perform the check. Currently unused.
    private String algorithm;
}
